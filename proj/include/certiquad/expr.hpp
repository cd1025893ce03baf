#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "certiquad/jet.hpp"

namespace certiquad {

// ---------------------------------------------------------------------------
// AST for arithmetic expressions in one variable `t`.
//
// Grammar (standard precedence, ^ tightest and right-associative, unary
// minus between ^ and * /):
//
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | power
//   power   := primary ('^' factor)?
//   primary := NUMBER | 't' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'
//   FUNC    := sin | cos | exp | log | sqrt | abs
// ---------------------------------------------------------------------------

enum class ExprKind { number, var, const_pi, const_e, neg, add, sub, mul, div, pow, call };

enum class FuncId { sin, cos, exp, log, sqrt, abs };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind;
    double number = 0.0;        // kind == number
    FuncId func = FuncId::sin;  // kind == call
    ExprPtr a, b;               // a: unary child / lhs, b: rhs
    bool has_var = false;       // subtree mentions `t`
    std::size_t pos = 0;        // byte offset of the subexpression in the source
    std::size_t len = 0;
};

/// Syntax or unknown-identifier error, with the byte offset it occurred at.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_;
};

/// Domain error during evaluation (log/sqrt/division/power), reported with
/// the offending subexpression.
class EvalError : public std::runtime_error {
  public:
    EvalError(const std::string& what, std::string subexpr, std::size_t offset)
        : std::runtime_error(what + " in '" + subexpr + "' at offset " + std::to_string(offset)),
          subexpr_(std::move(subexpr)),
          offset_(offset) {}
    const std::string& subexpr() const { return subexpr_; }
    std::size_t offset() const { return offset_; }

  private:
    std::string subexpr_;
    std::size_t offset_;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline ExprPtr node(Expr e) {
    e.has_var = e.kind == ExprKind::var || (e.a && e.a->has_var) || (e.b && e.b->has_var);
    return std::make_shared<const Expr>(std::move(e));
}

class Parser {
  public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr run() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
        ExprPtr e = expr();
        skip_ws();
        if (pos_ < src_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        for (;;) {
            if (eat('+')) lhs = binary(ExprKind::add, lhs, term());
            else if (eat('-')) lhs = binary(ExprKind::sub, lhs, term());
            else return lhs;
        }
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        for (;;) {
            if (eat('*')) lhs = binary(ExprKind::mul, lhs, factor());
            else if (eat('/')) lhs = binary(ExprKind::div, lhs, factor());
            else return lhs;
        }
    }

    ExprPtr factor() {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == '-') {
            std::size_t start = pos_++;
            ExprPtr child = factor();
            return node({.kind = ExprKind::neg, .a = child, .pos = start, .len = end_of(child) - start});
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (eat('^')) {
            ExprPtr exponent = factor();  // right-associative; allows t^-2
            return binary(ExprKind::pow, base, exponent);
        }
        return base;
    }

    ExprPtr primary() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError("expected expression", pos_);
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr inner = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    ExprPtr number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' was not an exponent; leave it for the identifier rule
            }
        }
        double value = 0.0;
        auto [end, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc{} || end != src_.data() + pos_)
            throw ParseError("malformed number literal", start);
        return node({.kind = ExprKind::number, .number = value, .pos = start, .len = pos_ - start});
    }

    ExprPtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        const std::size_t len = pos_ - start;
        if (name == "t") return node({.kind = ExprKind::var, .pos = start, .len = len});
        if (name == "pi") return node({.kind = ExprKind::const_pi, .pos = start, .len = len});
        if (name == "e") return node({.kind = ExprKind::const_e, .pos = start, .len = len});

        FuncId f;
        if (name == "sin") f = FuncId::sin;
        else if (name == "cos") f = FuncId::cos;
        else if (name == "exp") f = FuncId::exp;
        else if (name == "log") f = FuncId::log;
        else if (name == "sqrt") f = FuncId::sqrt;
        else if (name == "abs") f = FuncId::abs;
        else throw ParseError("unknown identifier '" + std::string(name) + "'", start);

        if (!eat('(')) throw ParseError("expected '(' after function name", pos_);
        ExprPtr arg = expr();
        if (!eat(')')) throw ParseError("expected ')'", pos_);
        return node({.kind = ExprKind::call, .func = f, .a = arg, .pos = start, .len = pos_ - start});
    }

    static std::size_t end_of(const ExprPtr& e) { return e->pos + e->len; }

    ExprPtr binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs) {
        const std::size_t start = lhs->pos;
        const std::size_t end = end_of(rhs);
        return node({.kind = kind, .a = std::move(lhs), .b = std::move(rhs),
                     .pos = start, .len = end - start});
    }
};

// Precedence levels used by unparse to insert the minimal parentheses that
// guarantee reparse identity.
inline int precedence(ExprKind k) {
    switch (k) {
        case ExprKind::add:
        case ExprKind::sub: return 1;
        case ExprKind::mul:
        case ExprKind::div: return 2;
        case ExprKind::neg: return 3;
        case ExprKind::pow: return 4;
        default: return 5;
    }
}

}  // namespace detail

/// Parses an expression in the variable `t`. Throws ParseError with a byte
/// offset on malformed input or unknown identifiers.
inline ExprPtr parse(std::string_view source) { return detail::Parser(source).run(); }

/// Structural equality; source spans are ignored.
inline bool equal(const ExprPtr& x, const ExprPtr& y) {
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case ExprKind::number: return x->number == y->number;
        case ExprKind::var:
        case ExprKind::const_pi:
        case ExprKind::const_e: return true;
        case ExprKind::call:
            return x->func == y->func && equal(x->a, y->a);
        case ExprKind::neg: return equal(x->a, y->a);
        default: return equal(x->a, y->a) && equal(x->b, y->b);
    }
}

/// Renders the tree back to source. parse(unparse(e)) is structurally equal
/// to e.
inline std::string unparse(const ExprPtr& e) {
    using detail::precedence;
    auto wrap = [](const std::string& s, bool parens) { return parens ? "(" + s + ")" : s; };
    switch (e->kind) {
        case ExprKind::number: return detail::format_double(e->number);
        case ExprKind::var: return "t";
        case ExprKind::const_pi: return "pi";
        case ExprKind::const_e: return "e";
        case ExprKind::neg:
            return "-" + wrap(unparse(e->a), precedence(e->a->kind) < 3);
        case ExprKind::add:
            return unparse(e->a) + "+" + wrap(unparse(e->b), precedence(e->b->kind) <= 1);
        case ExprKind::sub:
            return unparse(e->a) + "-" + wrap(unparse(e->b), precedence(e->b->kind) <= 1);
        case ExprKind::mul:
            return wrap(unparse(e->a), precedence(e->a->kind) < 2) + "*" +
                   wrap(unparse(e->b), precedence(e->b->kind) <= 2);
        case ExprKind::div:
            return wrap(unparse(e->a), precedence(e->a->kind) < 2) + "/" +
                   wrap(unparse(e->b), precedence(e->b->kind) <= 2);
        case ExprKind::pow:
            return wrap(unparse(e->a), precedence(e->a->kind) < 5) + "^" +
                   wrap(unparse(e->b), precedence(e->b->kind) < 3);
        case ExprKind::call: {
            const char* name = nullptr;
            switch (e->func) {
                case FuncId::sin: name = "sin"; break;
                case FuncId::cos: name = "cos"; break;
                case FuncId::exp: name = "exp"; break;
                case FuncId::log: name = "log"; break;
                case FuncId::sqrt: name = "sqrt"; break;
                case FuncId::abs: name = "abs"; break;
            }
            return std::string(name) + "(" + unparse(e->a) + ")";
        }
    }
    return {};
}

namespace detail {

[[noreturn]] inline void domain_error(const char* what, const Expr& e) {
    throw EvalError(what, unparse(std::make_shared<const Expr>(e)), e.pos);
}

inline double powi(double u, long k) {
    if (k == 0) return 1.0;
    if (k < 0) return 1.0 / powi_positive(u, -k);
    return powi_positive(u, k);
}

inline Jet2 powi(const Jet2& u, long k) {
    if (k == 0) return Jet2::constant(1.0);
    if (k < 0) return Jet2::constant(1.0) / powi_positive(u, -k);
    return powi_positive(u, k);
}

// Integer exponents are detected by value and dispatched to repeated
// multiplication, so t^2 works for t < 0. Non-integer exponents require a
// positive base; a t-dependent exponent goes through exp(w*log(u)).
inline bool integer_exponent(double c, long& k) {
    const double r = std::round(c);
    if (std::abs(c - r) < 1e-12 && std::abs(r) < 1e9) {
        k = static_cast<long>(r);
        return true;
    }
    return false;
}

}  // namespace detail

/// Plain evaluation at t. Bit-identical to eval_jet(e, t).v.
inline double eval(const ExprPtr& e, double t) {
    switch (e->kind) {
        case ExprKind::number: return e->number;
        case ExprKind::var: return t;
        case ExprKind::const_pi: return std::numbers::pi;
        case ExprKind::const_e: return std::numbers::e;
        case ExprKind::neg: return -eval(e->a, t);
        case ExprKind::add: return eval(e->a, t) + eval(e->b, t);
        case ExprKind::sub: return eval(e->a, t) - eval(e->b, t);
        case ExprKind::mul: return eval(e->a, t) * eval(e->b, t);
        case ExprKind::div: {
            const double num = eval(e->a, t), den = eval(e->b, t);
            if (den == 0.0) detail::domain_error("division by zero", *e);
            return num / den;
        }
        case ExprKind::pow: {
            const double base = eval(e->a, t);
            if (e->b->has_var) {
                if (base <= 0.0) detail::domain_error("power of non-positive base", *e);
                return std::exp(eval(e->b, t) * std::log(base));
            }
            const double c = eval(e->b, t);
            long k;
            if (detail::integer_exponent(c, k)) {
                if (base == 0.0 && k < 0) detail::domain_error("division by zero", *e);
                return detail::powi(base, k);
            }
            if (base <= 0.0) detail::domain_error("non-integer power of non-positive base", *e);
            return std::pow(base, c);
        }
        case ExprKind::call: {
            const double u = eval(e->a, t);
            switch (e->func) {
                case FuncId::sin: return std::sin(u);
                case FuncId::cos: return std::cos(u);
                case FuncId::exp: return std::exp(u);
                case FuncId::log:
                    if (u <= 0.0) detail::domain_error("log of non-positive value", *e);
                    return std::log(u);
                case FuncId::sqrt:
                    if (u < 0.0) detail::domain_error("sqrt of negative value", *e);
                    return std::sqrt(u);
                case FuncId::abs: return u >= 0.0 ? u : -u;
            }
        }
    }
    return 0.0;
}

/// Evaluates (f(t), f'(t), f''(t)) by second-order forward AD, seeded with
/// (t, 1, 0).
inline Jet2 eval_jet(const ExprPtr& e, double t) {
    switch (e->kind) {
        case ExprKind::number: return Jet2::constant(e->number);
        case ExprKind::var: return Jet2::variable(t);
        case ExprKind::const_pi: return Jet2::constant(std::numbers::pi);
        case ExprKind::const_e: return Jet2::constant(std::numbers::e);
        case ExprKind::neg: return -eval_jet(e->a, t);
        case ExprKind::add: return eval_jet(e->a, t) + eval_jet(e->b, t);
        case ExprKind::sub: return eval_jet(e->a, t) - eval_jet(e->b, t);
        case ExprKind::mul: return eval_jet(e->a, t) * eval_jet(e->b, t);
        case ExprKind::div: {
            const Jet2 num = eval_jet(e->a, t), den = eval_jet(e->b, t);
            if (den.v == 0.0) detail::domain_error("division by zero", *e);
            return num / den;
        }
        case ExprKind::pow: {
            const Jet2 base = eval_jet(e->a, t);
            if (e->b->has_var) {
                if (base.v <= 0.0) detail::domain_error("power of non-positive base", *e);
                return exp(eval_jet(e->b, t) * log(base));
            }
            const double c = eval(e->b, t);
            long k;
            if (detail::integer_exponent(c, k)) {
                if (base.v == 0.0 && k < 0) detail::domain_error("division by zero", *e);
                return detail::powi(base, k);
            }
            if (base.v <= 0.0) detail::domain_error("non-integer power of non-positive base", *e);
            return pow_const(base, c);
        }
        case ExprKind::call: {
            const Jet2 u = eval_jet(e->a, t);
            switch (e->func) {
                case FuncId::sin: return sin(u);
                case FuncId::cos: return cos(u);
                case FuncId::exp: return exp(u);
                case FuncId::log:
                    if (u.v <= 0.0) detail::domain_error("log of non-positive value", *e);
                    return log(u);
                case FuncId::sqrt:
                    if (u.v < 0.0) detail::domain_error("sqrt of negative value", *e);
                    return sqrt(u);
                case FuncId::abs: return abs(u);
            }
        }
    }
    return {};
}

}  // namespace certiquad
