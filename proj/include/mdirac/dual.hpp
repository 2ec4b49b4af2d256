#pragma once

#include <cmath>

#include "mdirac/errors.hpp"

namespace mdirac {

/// Forward-mode dual number: value + one directional derivative. The `smooth`
/// flag records whether the derivative is trustworthy (abs at 0 and sqrt at 0
/// clear it instead of producing garbage).
struct Dual {
    double v = 0.0;
    double d = 0.0;
    bool smooth = true;

    Dual() = default;
    Dual(double value) : v(value) {}
    Dual(double value, double deriv) : v(value), d(deriv) {}
    Dual(double value, double deriv, bool ok) : v(value), d(deriv), smooth(ok) {}
};

inline Dual operator+(const Dual& a, const Dual& b) {
    return {a.v + b.v, a.d + b.d, a.smooth && b.smooth};
}
inline Dual operator-(const Dual& a, const Dual& b) {
    return {a.v - b.v, a.d - b.d, a.smooth && b.smooth};
}
inline Dual operator-(const Dual& a) { return {-a.v, -a.d, a.smooth}; }
inline Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d, a.smooth && b.smooth};
}
inline Dual operator/(const Dual& a, const Dual& b) {
    if (b.v == 0.0) throw EvalDomainError("division by zero");
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v), a.smooth && b.smooth};
}

inline Dual sin(const Dual& a) { return {std::sin(a.v), std::cos(a.v) * a.d, a.smooth}; }
inline Dual cos(const Dual& a) { return {std::cos(a.v), -std::sin(a.v) * a.d, a.smooth}; }
inline Dual exp(const Dual& a) {
    const double e = std::exp(a.v);
    return {e, e * a.d, a.smooth};
}
inline Dual log(const Dual& a) {
    if (a.v <= 0.0) throw EvalDomainError("log of a non-positive number");
    return {std::log(a.v), a.d / a.v, a.smooth};
}
inline Dual sqrt(const Dual& a) {
    if (a.v < 0.0) throw EvalDomainError("sqrt of a negative number");
    if (a.v == 0.0) return {0.0, 0.0, a.d == 0.0 && a.smooth};
    const double s = std::sqrt(a.v);
    return {s, 0.5 * a.d / s, a.smooth};
}
inline Dual abs(const Dual& a) {
    if (a.v == 0.0) return {0.0, 0.0, a.d == 0.0 && a.smooth};
    const double sign = a.v > 0.0 ? 1.0 : -1.0;
    return {std::abs(a.v), sign * a.d, a.smooth};
}

} // namespace mdirac
