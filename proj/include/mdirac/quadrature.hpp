#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mdirac/errors.hpp"

namespace mdirac {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // estimated absolute error
};

/// Adaptive Gauss-Kronrod integration of f over [a, b] to absolute tolerance.
/// Throws NumericalError when the error estimate cannot be brought below tol.
template <class F>
QuadResult integrate(F&& f, double a, double b, double tol = 1e-10) {
    if (a == b) return {0.0, 0.0};
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0;
    // boost's termination is relative; run with a tight relative target and
    // check the absolute estimate ourselves.
    double v = GK::integrate(f, a, b, 15, 1e-14, &err);
    if (!(std::isfinite(v))) {
        throw NumericalError("quadrature produced a non-finite value on [" + std::to_string(a) +
                             ", " + std::to_string(b) + "]");
    }
    if (err > tol && err > 1e-12 * std::abs(v)) {
        throw NumericalError("quadrature did not reach tolerance " + std::to_string(tol) +
                             " on [" + std::to_string(a) + ", " + std::to_string(b) +
                             "]; achieved estimate " + std::to_string(err));
    }
    return {v, err};
}

/// Integral of f over [a, infinity), mapped through r = a + t/(1-t) onto [0,1).
template <class F>
QuadResult integrate_semi_infinite(F&& f, double a, double tol = 1e-10) {
    auto g = [&](double t) {
        const double om = 1.0 - t;
        const double r = a + t / om;
        const double jac = 1.0 / (om * om);
        return f(r) * jac;
    };
    return integrate(g, 0.0, 1.0, tol);
}

/// Cumulative antiderivative table: F(x_i) = integral of f over [x0, x_i] on a
/// uniform grid, each cell integrated by Gauss-Kronrod. Supports Hermite
/// interpolation (values + derivatives f at the nodes).
class CumulativeTable {
  public:
    CumulativeTable() = default;

    template <class F>
    CumulativeTable(F&& f, double x0, double x1, std::size_t cells, double cell_tol = 1e-12)
        : x0_(x0), dx_((x1 - x0) / static_cast<double>(cells)) {
        if (!(x1 > x0) || cells == 0) throw ArgumentError("CumulativeTable: empty range");
        vals_.resize(cells + 1);
        derivs_.resize(cells + 1);
        vals_[0] = 0.0;
        derivs_[0] = f(x0);
        double acc = 0.0;
        for (std::size_t i = 0; i < cells; ++i) {
            const double a = x0_ + dx_ * static_cast<double>(i);
            const double b = a + dx_;
            acc += integrate(f, a, b, cell_tol).value;
            vals_[i + 1] = acc;
            derivs_[i + 1] = f(b);
        }
    }

    double x_min() const { return x0_; }
    double x_max() const { return x0_ + dx_ * static_cast<double>(vals_.size() - 1); }

    /// Cubic Hermite interpolation of the antiderivative.
    double operator()(double x) const {
        const std::size_t n = vals_.size() - 1;
        double s = (x - x0_) / dx_;
        if (s <= 0.0) {
            // linear continuation with the end-point slope
            return vals_[0] + derivs_[0] * (x - x0_);
        }
        if (s >= static_cast<double>(n)) {
            return vals_[n] + derivs_[n] * (x - x_max());
        }
        const std::size_t i = static_cast<std::size_t>(s);
        const double t = s - static_cast<double>(i);
        const double y0 = vals_[i], y1 = vals_[i + 1];
        const double m0 = derivs_[i] * dx_, m1 = derivs_[i + 1] * dx_;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
               (t3 - t2) * m1;
    }

  private:
    double x0_ = 0.0;
    double dx_ = 1.0;
    std::vector<double> vals_;
    std::vector<double> derivs_;
};

} // namespace mdirac
