#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mdirac/clifford.hpp"
#include "mdirac/expr.hpp"
#include "mdirac/quadrature.hpp"

namespace mdirac {

using Point3 = std::array<double, 3>; // trailing component unused when d = 2

inline std::string point_to_string(const Point3& x, int dim) {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < dim; ++i) {
        if (i) os << ", ";
        os << x[static_cast<std::size_t>(i)];
    }
    os << ')';
    return os.str();
}

// ---------------------------------------------------------------------------
// One-dimensional profiles eta(.)
// ---------------------------------------------------------------------------

/// Scalar profile of one variable, either a parsed expression (in r or t) or a
/// sampled table with linear interpolation. Immutable and cheap to copy.
class Profile {
  public:
    Profile() : Profile(0.0) {}

    explicit Profile(double constant) {
        fn_ = [constant](double) { return constant; };
        expr_ = make_number(constant);
    }

    /// Expression in exactly one scalar variable (r or t); constants allowed.
    static Profile from_expr(Expr e) {
        const VarMask m = variables_of(e);
        if (m.any_x()) throw ArgumentError("a 1-d profile may not use x1/x2/x3");
        if (m.has(ExprVar::R) && m.has(ExprVar::T))
            throw ArgumentError("a 1-d profile may not mix r and t");
        Profile p;
        p.expr_ = e;
        const ExprVar v = m.has(ExprVar::T) ? ExprVar::T : ExprVar::R;
        p.fn_ = [e, v](double x) {
            EvalEnv<double> env;
            env.vals[static_cast<std::size_t>(v)] = x;
            return eval_expr(e, env);
        };
        p.dfn_ = [e, v](double x) {
            EvalEnv<Dual> env;
            env.vals[static_cast<std::size_t>(v)] = Dual(x, 1.0);
            return eval_expr(e, env);
        };
        return p;
    }

    static Profile from_text(std::string_view text) { return from_expr(parse_expr(text)); }

    /// Sampled table (sorted abscissae) with linear interpolation; constant
    /// extension beyond the ends.
    static Profile from_table(std::vector<double> xs, std::vector<double> vals) {
        if (xs.size() != vals.size() || xs.size() < 2)
            throw ArgumentError("profile table needs at least two (x, value) rows");
        if (!std::is_sorted(xs.begin(), xs.end()))
            throw ArgumentError("profile table abscissae must be sorted");
        auto tab = std::make_shared<Table>(Table{std::move(xs), std::move(vals)});
        Profile p;
        p.fn_ = [tab](double x) { return tab->eval(x); };
        p.table_ = tab;
        return p;
    }

    static Profile from_function(std::function<double(double)> f) {
        Profile p;
        p.fn_ = std::move(f);
        return p;
    }

    double operator()(double x) const { return fn_(x); }

    /// Derivative; only available for expression-backed profiles.
    Dual eval_dual(double x) const {
        if (!dfn_) throw ArgumentError("profile has no derivative (not expression-backed)");
        return dfn_(x);
    }

    bool differentiable() const { return static_cast<bool>(dfn_); }
    const Expr& expr() const { return expr_; } // may be null
    bool sampled() const { return static_cast<bool>(table_); }

  private:
    struct Table {
        std::vector<double> xs;
        std::vector<double> vals;
        double eval(double x) const {
            if (x <= xs.front()) return vals.front();
            if (x >= xs.back()) return vals.back();
            const auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
            const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
            return vals[i] + w * (vals[i + 1] - vals[i]);
        }
    };

    std::function<double(double)> fn_;
    std::function<Dual(double)> dfn_;
    Expr expr_;
    std::shared_ptr<const Table> table_;
};

/// xi(t) = integral of eta over [0, t] by adaptive quadrature (sign-aware for
/// t < 0). Absolute error at most tol.
inline double antiderivative_profile(const Profile& eta, double t, double tol = 1e-10) {
    if (t == 0.0) return 0.0;
    auto f = [&eta](double s) { return eta(s); };
    if (t > 0.0) return integrate(f, 0.0, t, tol).value;
    return -integrate(f, t, 0.0, tol).value;
}

// ---------------------------------------------------------------------------
// Potentials q on R^d
// ---------------------------------------------------------------------------

enum class PotentialKind { Cartesian, Radial, Layered };

/// Scalar potential: a Cartesian expression q(x1..xd), a radial profile
/// q = eta(|x|), or a layered profile q = eta(x.k) with unit direction k.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::Cartesian;
    int dim = 3;
    Expr expr;                          // Cartesian body or profile body
    std::optional<double> period;       // Radial only, > 0
    std::array<double, 3> direction{};  // Layered only, unit

    static PotentialSpec cartesian(Expr e, int dim) {
        check_dim(dim);
        const VarMask m = variables_of(e);
        if (m.has(ExprVar::R) || m.has(ExprVar::T))
            throw ArgumentError("a Cartesian potential uses x1..xd only");
        if (dim == 2 && m.has_x3())
            throw ArgumentError("x3 is not a legal variable for a 2-d potential");
        PotentialSpec s;
        s.kind = PotentialKind::Cartesian;
        s.dim = dim;
        s.expr = std::move(e);
        return s;
    }

    static PotentialSpec radial(Expr e, int dim, std::optional<double> period = {}) {
        check_dim(dim);
        const VarMask m = variables_of(e);
        if (m.any_x() || m.has(ExprVar::T))
            throw ArgumentError("a radial potential uses the variable r only");
        if (period && !(*period > 0.0)) throw ArgumentError("radial period must be positive");
        PotentialSpec s;
        s.kind = PotentialKind::Radial;
        s.dim = dim;
        s.expr = std::move(e);
        s.period = period;
        return s;
    }

    static PotentialSpec layered(Expr e, int dim, std::array<double, 3> k) {
        check_dim(dim);
        const VarMask m = variables_of(e);
        if (m.any_x() || m.has(ExprVar::R))
            throw ArgumentError("a layered potential uses the variable t only");
        PotentialSpec s;
        s.kind = PotentialKind::Layered;
        s.dim = dim;
        if (dim == 2) k[2] = 0.0;
        double n2 = 0.0;
        for (double c : k) n2 += c * c;
        if (n2 == 0.0) throw ArgumentError("layered direction must be nonzero");
        const double n = std::sqrt(n2);
        for (double& c : k) c /= n;
        s.direction = k;
        s.expr = std::move(e);
        return s;
    }

    /// Profile view of a Radial/Layered potential.
    Profile profile() const {
        if (kind == PotentialKind::Cartesian)
            throw ArgumentError("a Cartesian potential has no 1-d profile");
        return Profile::from_expr(expr);
    }

  private:
    static void check_dim(int dim) {
        if (dim != 2 && dim != 3) throw ArgumentError("potential dimension must be 2 or 3");
    }
};

/// Infer the potential kind from the variables used: r -> Radial, t -> Layered,
/// x1..xd -> Cartesian. Constants default to Cartesian.
inline PotentialKind infer_kind(const Expr& e) {
    const VarMask m = variables_of(e);
    const bool r = m.has(ExprVar::R), t = m.has(ExprVar::T), x = m.any_x();
    if (static_cast<int>(r) + static_cast<int>(t) + static_cast<int>(x) > 1)
        throw ArgumentError("expression mixes variables of different potential kinds");
    if (r) return PotentialKind::Radial;
    if (t) return PotentialKind::Layered;
    return PotentialKind::Cartesian;
}

namespace detail {

inline double radius_of(const Point3& x, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    return std::sqrt(s);
}

inline double dot_dir(const Point3& x, const std::array<double, 3>& k, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += x[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(i)];
    return s;
}

template <class T>
T eval_scalar_var(const Expr& e, ExprVar v, T value) {
    EvalEnv<T> env;
    env.vals[static_cast<std::size_t>(v)] = value;
    return eval_expr(e, env);
}

inline ExprVar profile_var(const Expr& e) {
    return variables_of(e).has(ExprVar::T) ? ExprVar::T : ExprVar::R;
}

} // namespace detail

/// q(x). Domain faults are reported with the offending point.
inline double eval(const PotentialSpec& q, const Point3& x) {
    try {
        switch (q.kind) {
            case PotentialKind::Radial:
                return detail::eval_scalar_var(q.expr, detail::profile_var(q.expr),
                                               detail::radius_of(x, q.dim));
            case PotentialKind::Layered:
                return detail::eval_scalar_var(q.expr, detail::profile_var(q.expr),
                                               detail::dot_dir(x, q.direction, q.dim));
            case PotentialKind::Cartesian: {
                EvalEnv<double> env;
                for (int i = 0; i < q.dim; ++i)
                    env.vals[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
                return eval_expr(q.expr, env);
            }
        }
    } catch (const EvalDomainError& e) {
        throw EvalDomainError(std::string(e.what()) + " at point " + point_to_string(x, q.dim));
    }
    throw InvariantError("eval: corrupt potential kind");
}

struct GradResult {
    std::array<double, 3> grad{};
    bool smooth = true; // false when a non-differentiable point was hit
};

/// Gradient of q by forward-mode dual propagation through the AST.
inline GradResult grad(const PotentialSpec& q, const Point3& x) {
    GradResult out;
    try {
        switch (q.kind) {
            case PotentialKind::Radial: {
                const double r = detail::radius_of(x, q.dim);
                const Dual dr =
                    detail::eval_scalar_var(q.expr, detail::profile_var(q.expr), Dual(r, 1.0));
                out.smooth = dr.smooth;
                if (r == 0.0) {
                    // grad eta(|x|) at the origin exists only if eta'(0) = 0
                    if (dr.d != 0.0) out.smooth = false;
                    return out;
                }
                for (int i = 0; i < q.dim; ++i)
                    out.grad[static_cast<std::size_t>(i)] = dr.d * x[static_cast<std::size_t>(i)] / r;
                return out;
            }
            case PotentialKind::Layered: {
                const double t = detail::dot_dir(x, q.direction, q.dim);
                const Dual dt =
                    detail::eval_scalar_var(q.expr, detail::profile_var(q.expr), Dual(t, 1.0));
                out.smooth = dt.smooth;
                for (int i = 0; i < q.dim; ++i)
                    out.grad[static_cast<std::size_t>(i)] =
                        dt.d * q.direction[static_cast<std::size_t>(i)];
                return out;
            }
            case PotentialKind::Cartesian: {
                for (int i = 0; i < q.dim; ++i) {
                    EvalEnv<Dual> env;
                    for (int j = 0; j < q.dim; ++j)
                        env.vals[static_cast<std::size_t>(j)] =
                            Dual(x[static_cast<std::size_t>(j)], i == j ? 1.0 : 0.0);
                    const Dual d = eval_expr(q.expr, env);
                    out.grad[static_cast<std::size_t>(i)] = d.d;
                    out.smooth = out.smooth && d.smooth;
                }
                return out;
            }
        }
    } catch (const EvalDomainError& e) {
        throw EvalDomainError(std::string(e.what()) + " at point " + point_to_string(x, q.dim));
    }
    throw InvariantError("grad: corrupt potential kind");
}

/// v(x) = q(x) + x . grad q(x), the function whose range bounds the point
/// spectrum. For radial and layered potentials this reduces to one variable.
inline double virial_density(const PotentialSpec& q, const Point3& x, bool* smooth = nullptr) {
    switch (q.kind) {
        case PotentialKind::Radial: {
            const double r = detail::radius_of(x, q.dim);
            const Dual d = detail::eval_scalar_var(q.expr, detail::profile_var(q.expr), Dual(r, 1.0));
            if (smooth) *smooth = d.smooth;
            return d.v + r * d.d;
        }
        case PotentialKind::Layered: {
            const double t = detail::dot_dir(x, q.direction, q.dim);
            const Dual d = detail::eval_scalar_var(q.expr, detail::profile_var(q.expr), Dual(t, 1.0));
            if (smooth) *smooth = d.smooth;
            return d.v + t * d.d;
        }
        case PotentialKind::Cartesian: {
            const GradResult g = grad(q, x);
            if (smooth) *smooth = g.smooth;
            double s = eval(q, x);
            for (int i = 0; i < q.dim; ++i)
                s += x[static_cast<std::size_t>(i)] * g.grad[static_cast<std::size_t>(i)];
            return s;
        }
    }
    throw InvariantError("virial_density: corrupt potential kind");
}

} // namespace mdirac
