#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "mdirac/errors.hpp"

namespace mdirac {

using cplx = std::complex<double>;

/// Dense complex N x N matrix in row-major order. Only N = 2 and N = 4 are
/// used; sizes this small do not warrant a linear-algebra dependency.
template <std::size_t N>
struct CMat {
    std::array<cplx, N * N> a{};

    static constexpr std::size_t dim = N;

    cplx& operator()(std::size_t i, std::size_t j) { return a[i * N + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * N + j]; }

    static CMat identity() {
        CMat m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    CMat operator+(const CMat& o) const {
        CMat r;
        for (std::size_t i = 0; i < N * N; ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }
    CMat operator-(const CMat& o) const {
        CMat r;
        for (std::size_t i = 0; i < N * N; ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }
    CMat operator*(const CMat& o) const {
        CMat r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const cplx s = (*this)(i, k);
                if (s == cplx{}) continue;
                for (std::size_t j = 0; j < N; ++j) r(i, j) += s * o(k, j);
            }
        return r;
    }
    friend CMat operator*(cplx s, const CMat& m) {
        CMat r;
        for (std::size_t i = 0; i < N * N; ++i) r.a[i] = s * m.a[i];
        return r;
    }

    CMat adjoint() const {
        CMat r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj((*this)(j, i));
        return r;
    }

    bool hermitian(double tol = 1e-14) const {
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
        return true;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : a) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double s = 0.0;
        for (const auto& z : a) s = std::max(s, std::abs(z));
        return s;
    }
};

using CMat2 = CMat<2>;
using CMat4 = CMat<4>;

/// Complex N-vector (spinor values live in C^2 or C^4).
template <std::size_t N>
using CVec = std::array<cplx, N>;

template <std::size_t N>
CVec<N> operator*(const CMat<N>& m, const CVec<N>& v) {
    CVec<N> r{};
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r[i] += m(i, j) * v[j];
    return r;
}

template <std::size_t N>
double norm(const CVec<N>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

template <std::size_t N>
cplx dot(const CVec<N>& a, const CVec<N>& b) { // conjugate-linear in the first slot
    cplx s{};
    for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

template <std::size_t N>
CVec<N> normalized(const CVec<N>& v) {
    const double n = norm(v);
    if (n == 0.0) throw ArgumentError("cannot normalize a zero spinor");
    CVec<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = v[i] / n;
    return r;
}

/// sigma_1, sigma_2, sigma_3 (index 1-based).
inline CMat2 pauli(int j) {
    const cplx i{0.0, 1.0};
    CMat2 m;
    switch (j) {
        case 1:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case 2:
            m(0, 1) = -i;
            m(1, 0) = i;
            break;
        case 3:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
        default:
            throw ArgumentError("pauli index must be 1, 2 or 3; got " + std::to_string(j));
    }
    return m;
}

/// alpha_j: block anti-diagonal with sigma_j in the off-diagonal blocks.
inline CMat4 alpha(int j) {
    const CMat2 s = pauli(j);
    CMat4 m;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k) {
            m(i, k + 2) = s(i, k);
            m(i + 2, k) = s(i, k);
        }
    return m;
}

/// sigma . v for v in R^2.
inline CMat2 sigma_dot(const std::array<double, 2>& v) {
    CMat2 m;
    for (int j = 0; j < 2; ++j) m = m + (cplx{v[static_cast<std::size_t>(j)], 0.0} * pauli(j + 1));
    return m;
}

/// alpha . v for v in R^3.
inline CMat4 alpha_dot(const std::array<double, 3>& v) {
    CMat4 m;
    for (int j = 0; j < 3; ++j) m = m + (cplx{v[static_cast<std::size_t>(j)], 0.0} * alpha(j + 1));
    return m;
}

/// Dimension-dispatched matrix dot product: sigma.v (d=2) or alpha.v (d=3).
template <std::size_t D>
auto dirac_dot(const std::array<double, D>& v) {
    static_assert(D == 2 || D == 3, "dirac_dot supports d = 2 or 3 only");
    if constexpr (D == 2)
        return sigma_dot(v);
    else
        return alpha_dot(v);
}

namespace detail {
template <std::size_t D>
void require_unit(const std::array<double, D>& k) {
    double s = 0.0;
    for (double c : k) s += c * c;
    if (std::abs(std::sqrt(s) - 1.0) > 1e-12)
        throw ArgumentError("direction vector must have unit length");
}
} // namespace detail

/// Unit vector in R^D, normalized on construction (|v| = 1 within 1e-12).
template <std::size_t D>
std::array<double, D> unit_vector(std::array<double, D> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    const double n = std::sqrt(s);
    if (n == 0.0) throw ArgumentError("cannot normalize the zero vector");
    for (double& c : v) c /= n;
    detail::require_unit(v);
    return v;
}

/// exp(-i (dirac_dot k) theta) for unit k. Since (dirac_dot k)^2 = I the
/// exponential closes as I cos(theta) - i (dirac_dot k) sin(theta).
template <std::size_t D>
auto dirac_exp(const std::array<double, D>& k, double theta) {
    detail::require_unit(k);
    auto m = dirac_dot(k);
    using M = decltype(m);
    const cplx minus_i_sin{0.0, -std::sin(theta)};
    M r = M::identity();
    const double c = std::cos(theta);
    for (std::size_t i = 0; i < M::dim * M::dim; ++i) r.a[i] = c * r.a[i] + minus_i_sin * m.a[i];
    return r;
}

/// Deterministic unit eigenspinor with (dirac_dot k) phi = phi. Projects the
/// first canonical basis vector whose projection under (I + dirac_dot k)/2 is
/// well-conditioned; the projector has rank 2^(D-2)+... >= 1, so a seed with
/// squared projection norm >= 1/4 always exists.
template <std::size_t D>
auto plus_eigenspinor(const std::array<double, D>& k) {
    detail::require_unit(k);
    auto m = dirac_dot(k);
    constexpr std::size_t N = decltype(m)::dim;
    // P = (I + m)/2; |P e_j|^2 = P_jj because P is an orthogonal projector.
    auto p = m;
    for (std::size_t i = 0; i < N; ++i) p(i, i) += 1.0;
    for (auto& z : p.a) z *= 0.5;
    for (std::size_t seed = 0; seed < N; ++seed) {
        CVec<N> e{};
        e[seed] = 1.0;
        CVec<N> v = p * e;
        if (norm(v) * norm(v) >= 0.25) return normalized(v);
    }
    throw InvariantError("plus_eigenspinor: all basis seeds were annihilated by the projector");
}

} // namespace mdirac
