#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "mdirac/errors.hpp"

namespace mdirac {

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0; // 0 = choose automatically
    double max_step = 0.0;     // 0 = unrestricted
};

/// One accepted step, as seen by an observer. Slopes at both ends enable
/// cubic Hermite dense output without extra function evaluations.
template <std::size_t N>
struct OdeStep {
    double t0, t1;
    const std::array<double, N>& y0;
    const std::array<double, N>& y1;
    const std::array<double, N>& f0;
    const std::array<double, N>& f1;
};

/// Cubic Hermite interpolation inside an accepted step.
template <std::size_t N>
std::array<double, N> hermite_eval(const OdeStep<N>& s, double t) {
    const double h = s.t1 - s.t0;
    const double u = (t - s.t0) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1;
    const double h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2;
    const double h11 = u3 - u2;
    std::array<double, N> out;
    for (std::size_t i = 0; i < N; ++i)
        out[i] = h00 * s.y0[i] + h10 * h * s.f0[i] + h01 * s.y1[i] + h11 * h * s.f1[i];
    return out;
}

namespace detail {
struct NullObserver {
    template <std::size_t N>
    void operator()(const OdeStep<N>&) const {}
};
} // namespace detail

/// Adaptive Dormand-Prince 5(4) integration of y' = rhs(t, y) from t0 to t1.
/// The local error per step is controlled against abs_tol + rel_tol*|y|.
/// Throws NumericalError on step-size underflow (e.g. an actual singularity).
template <std::size_t N, class RHS, class Observer = detail::NullObserver>
std::array<double, N> integrate_ode(RHS&& rhs, double t0, double t1, std::array<double, N> y,
                                    const OdeOptions& opt = {}, Observer&& observe = {}) {
    if (t0 == t1) return y;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);

    // Dormand-Prince tableau
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    std::array<double, N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    rhs(t0, y, k1);

    double t = t0;
    double h = opt.initial_step > 0.0 ? opt.initial_step : std::min(0.1 * span, 1.0);
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

    const int max_steps = 200'000'000;
    for (int step = 0; step < max_steps; ++step) {
        if (std::abs(t - t1) <= 0.0) break;
        h = std::min(h, std::abs(t1 - t));
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw NumericalError("ODE step size underflow near t = " + std::to_string(t));
        const double hs = dir * h;

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * a21 * k1[i];
        rhs(t + c2 * hs, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * hs, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * hs, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * hs, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                   a65 * k5[i]);
        rhs(t + hs, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + hs, ynew, k7); // FSAL

        double err2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double scale =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double r = e / scale;
            err2 += r * r;
        }
        const double err = std::sqrt(err2 / static_cast<double>(N));

        if (err <= 1.0) {
            const double tnew = t + hs;
            observe(OdeStep<N>{t, tnew, y, ynew, k1, k7});
            t = tnew;
            y = ynew;
            k1 = k7;
            if (t == t1 || (dir > 0 ? t >= t1 : t <= t1)) return y;
        }
        const double factor =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h *= factor;
        if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    }
    throw NumericalError("ODE integrator exceeded the step budget on [" + std::to_string(t0) +
                         ", " + std::to_string(t1) + "]");
}

} // namespace mdirac
