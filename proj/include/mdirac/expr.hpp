#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "mdirac/constants.hpp"
#include "mdirac/dual.hpp"
#include "mdirac/errors.hpp"

namespace mdirac {

// ---------------------------------------------------------------------------
// AST
// ---------------------------------------------------------------------------

enum class ExprKind : std::uint8_t { Number, Pi, Var, Add, Sub, Mul, Div, Pow, Neg, Fun };
enum class ExprVar : std::uint8_t { X1, X2, X3, R, T };
enum class ExprFun : std::uint8_t { Sin, Cos, Exp, Sqrt, Abs, Log };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    double number = 0.0;
    ExprVar var = ExprVar::X1;
    ExprFun fun = ExprFun::Sin;
    Expr lhs;
    Expr rhs;
};

inline Expr make_number(double v) {
    return std::make_shared<ExprNode>(ExprNode{ExprKind::Number, v});
}
inline Expr make_pi() { return std::make_shared<ExprNode>(ExprNode{ExprKind::Pi}); }
inline Expr make_var(ExprVar v) {
    ExprNode n{ExprKind::Var};
    n.var = v;
    return std::make_shared<ExprNode>(n);
}
inline Expr make_binary(ExprKind k, Expr a, Expr b) {
    ExprNode n{k};
    n.lhs = std::move(a);
    n.rhs = std::move(b);
    return std::make_shared<ExprNode>(n);
}
inline Expr make_neg(Expr a) {
    ExprNode n{ExprKind::Neg};
    n.lhs = std::move(a);
    return std::make_shared<ExprNode>(n);
}
inline Expr make_fun(ExprFun f, Expr a) {
    ExprNode n{ExprKind::Fun};
    n.fun = f;
    n.lhs = std::move(a);
    return std::make_shared<ExprNode>(n);
}

/// Bitmask of variables appearing in an expression.
struct VarMask {
    unsigned bits = 0;
    bool has(ExprVar v) const { return bits >> static_cast<unsigned>(v) & 1u; }
    void add(ExprVar v) { bits |= 1u << static_cast<unsigned>(v); }
    bool any_x() const { return (bits & 0b111u) != 0; }
    bool has_x3() const { return has(ExprVar::X3); }
};

inline void collect_vars(const Expr& e, VarMask& m) {
    if (!e) return;
    if (e->kind == ExprKind::Var) m.add(e->var);
    collect_vars(e->lhs, m);
    collect_vars(e->rhs, m);
}

inline VarMask variables_of(const Expr& e) {
    VarMask m;
    collect_vars(e, m);
    return m;
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::Number:
            // bit comparison: round-trip printing must reproduce the double exactly
            return a->number == b->number;
        case ExprKind::Pi: return true;
        case ExprKind::Var: return a->var == b->var;
        case ExprKind::Fun:
            return a->fun == b->fun && structurally_equal(a->lhs, b->lhs);
        case ExprKind::Neg: return structurally_equal(a->lhs, b->lhs);
        default:
            return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    }
}

// ---------------------------------------------------------------------------
// Evaluation (generic over double / Dual)
// ---------------------------------------------------------------------------

template <class T>
struct EvalEnv {
    // values indexed by ExprVar
    std::array<T, 5> vals{};
};

template <class T>
T pow_generic(const T& base, const T& exp_value);

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }

template <class T>
T eval_expr(const Expr& e, const EvalEnv<T>& env) {
    switch (e->kind) {
        case ExprKind::Number: return T(e->number);
        case ExprKind::Pi: return T(kPi);
        case ExprKind::Var: return env.vals[static_cast<std::size_t>(e->var)];
        case ExprKind::Add: return eval_expr(e->lhs, env) + eval_expr(e->rhs, env);
        case ExprKind::Sub: return eval_expr(e->lhs, env) - eval_expr(e->rhs, env);
        case ExprKind::Mul: return eval_expr(e->lhs, env) * eval_expr(e->rhs, env);
        case ExprKind::Div: return eval_expr(e->lhs, env) / eval_expr(e->rhs, env);
        case ExprKind::Neg: return -eval_expr(e->lhs, env);
        case ExprKind::Pow: {
            T base = eval_expr(e->lhs, env);
            T ex = eval_expr(e->rhs, env);
            return pow_generic(base, ex);
        }
        case ExprKind::Fun: {
            T a = eval_expr(e->lhs, env);
            using std::abs;
            using std::cos;
            using std::exp;
            using std::log;
            using std::sin;
            using std::sqrt;
            switch (e->fun) {
                case ExprFun::Sin: return sin(a);
                case ExprFun::Cos: return cos(a);
                case ExprFun::Exp: return exp(a);
                case ExprFun::Sqrt: return sqrt(a);
                case ExprFun::Abs: return abs(a);
                case ExprFun::Log: return log(a);
            }
        }
    }
    throw InvariantError("eval_expr: corrupt AST node");
}

namespace detail {
inline bool integral_exponent(double e, long long& n) {
    if (std::abs(e) > 1e15) return false;
    const double r = std::nearbyint(e);
    if (r != e) return false;
    n = static_cast<long long>(r);
    return true;
}

template <class T>
T powi(T base, long long n) {
    if (n < 0) return T(1.0) / powi(base, -n);
    T r(1.0);
    while (n > 0) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}
} // namespace detail

/// a^b with the usual real-analysis domain: integer exponents work for any
/// base, fractional exponents require a positive base.
template <class T>
T pow_generic(const T& base, const T& exp_value) {
    const double ev = value_of(exp_value);
    long long n = 0;
    if (detail::integral_exponent(ev, n)) {
        if (value_of(base) == 0.0 && n <= 0) throw EvalDomainError("zero raised to a non-positive power");
        return detail::powi(base, n);
    }
    if (value_of(base) <= 0.0)
        throw EvalDomainError("non-positive base with fractional exponent");
    using std::exp;
    using std::log;
    return exp(exp_value * log(base));
}

// ---------------------------------------------------------------------------
// Parser: precedence  ^ (right-assoc)  >  unary -  >  * /  >  + -
// ---------------------------------------------------------------------------

namespace detail {

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("empty expression", 0);
        Expr e = parse_sum();
        skip_ws();
        if (pos_ < text_.size())
            throw ParseError("unexpected trailing input; expected end of expression or operator",
                             pos_);
        return e;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+'))
                e = make_binary(ExprKind::Add, e, parse_term());
            else if (accept('-'))
                e = make_binary(ExprKind::Sub, e, parse_term());
            else
                return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            if (accept('*'))
                e = make_binary(ExprKind::Mul, e, parse_factor());
            else if (accept('/'))
                e = make_binary(ExprKind::Div, e, parse_factor());
            else
                return e;
        }
    }

    Expr parse_factor() {
        if (accept('-')) return make_neg(parse_factor());
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (accept('^')) return make_binary(ExprKind::Pow, base, parse_factor());
        return base;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size())
            throw ParseError("expected a number, identifier or '('", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_sum();
            if (!accept(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw ParseError(std::string("unexpected character '") + c +
                             "'; expected a number, identifier or '('",
                         pos_);
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t e = pos_ + 1;
            if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
            if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
                pos_ = e;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            }
        }
        double v = 0.0;
        const auto res =
            std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc{} || res.ptr != text_.data() + pos_)
            throw ParseError("malformed number literal", start);
        return make_number(v);
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
            ++pos_;
        const std::string_view id = text_.substr(start, pos_ - start);
        if (id == "pi") return make_pi();
        if (id == "x1") return make_var(ExprVar::X1);
        if (id == "x2") return make_var(ExprVar::X2);
        if (id == "x3") return make_var(ExprVar::X3);
        if (id == "r") return make_var(ExprVar::R);
        if (id == "t") return make_var(ExprVar::T);
        ExprFun f;
        if (id == "sin")
            f = ExprFun::Sin;
        else if (id == "cos")
            f = ExprFun::Cos;
        else if (id == "exp")
            f = ExprFun::Exp;
        else if (id == "sqrt")
            f = ExprFun::Sqrt;
        else if (id == "abs")
            f = ExprFun::Abs;
        else if (id == "log")
            f = ExprFun::Log;
        else
            throw ParseError("unknown identifier '" + std::string(id) +
                                 "'; expected x1, x2, x3, r, t, pi or a function name",
                             start);
        if (!accept('(')) throw ParseError("expected '(' after function name", pos_);
        Expr arg = parse_sum();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return make_fun(f, arg);
    }
};

} // namespace detail

inline Expr parse_expr(std::string_view text) {
    if (text.empty()) throw ParseError("empty expression", 0);
    return detail::Parser(text).parse();
}

// ---------------------------------------------------------------------------
// Printer. parse(print(e)) is structurally identical to e.
// ---------------------------------------------------------------------------

namespace detail {

inline int precedence_of(const ExprNode& n) {
    switch (n.kind) {
        case ExprKind::Add:
        case ExprKind::Sub: return 1;
        case ExprKind::Mul:
        case ExprKind::Div: return 2;
        case ExprKind::Neg: return 3;
        case ExprKind::Pow: return 4;
        default: return 5;
    }
}

inline std::string format_literal(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void print_node(const Expr& e, int min_prec, std::string& out) {
    const int prec = precedence_of(*e);
    const bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (e->kind) {
        case ExprKind::Number: out += format_literal(e->number); break;
        case ExprKind::Pi: out += "pi"; break;
        case ExprKind::Var: {
            static constexpr const char* names[] = {"x1", "x2", "x3", "r", "t"};
            out += names[static_cast<std::size_t>(e->var)];
            break;
        }
        case ExprKind::Add:
        case ExprKind::Sub:
        case ExprKind::Mul:
        case ExprKind::Div: {
            const char op = e->kind == ExprKind::Add   ? '+'
                            : e->kind == ExprKind::Sub ? '-'
                            : e->kind == ExprKind::Mul ? '*'
                                                       : '/';
            print_node(e->lhs, prec, out);
            out += op;
            print_node(e->rhs, prec + 1, out); // left-associative
            break;
        }
        case ExprKind::Pow:
            print_node(e->lhs, prec + 1, out); // right-associative
            out += '^';
            print_node(e->rhs, prec, out);
            break;
        case ExprKind::Neg:
            out += '-';
            print_node(e->lhs, prec, out);
            break;
        case ExprKind::Fun: {
            static constexpr const char* names[] = {"sin", "cos", "exp", "sqrt", "abs", "log"};
            out += names[static_cast<std::size_t>(e->fun)];
            out += '(';
            print_node(e->lhs, 0, out);
            out += ')';
            break;
        }
    }
    if (parens) out += ')';
}

} // namespace detail

inline std::string print_expr(const Expr& e) {
    std::string out;
    detail::print_node(e, 0, out);
    return out;
}

} // namespace mdirac
