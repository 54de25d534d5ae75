#include "tsys/expr.hpp"

#include <array>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace tsys {

namespace ast {

ExprPtr num(double value) {
    return std::make_shared<Expr>(ExprKind::Number, value, 0, nullptr, nullptr);
}

ExprPtr var() {
    static const ExprPtr x = std::make_shared<Expr>(ExprKind::Var, 0.0, 0, nullptr, nullptr);
    return x;
}

static ExprPtr unary(ExprKind k, ExprPtr e) {
    return std::make_shared<Expr>(k, 0.0, 0, std::move(e), nullptr);
}

static ExprPtr binary(ExprKind k, ExprPtr l, ExprPtr r) {
    return std::make_shared<Expr>(k, 0.0, 0, std::move(l), std::move(r));
}

ExprPtr neg(ExprPtr e) {
    // negated literals fold: the grammar has no unary-minus node for numbers,
    // so Neg(Number) could never round-trip through print/parse
    if (e->kind == ExprKind::Number) return num(-e->number);
    return unary(ExprKind::Neg, std::move(e));
}
ExprPtr add(ExprPtr l, ExprPtr r) { return binary(ExprKind::Add, std::move(l), std::move(r)); }
ExprPtr sub(ExprPtr l, ExprPtr r) { return binary(ExprKind::Sub, std::move(l), std::move(r)); }
ExprPtr mul(ExprPtr l, ExprPtr r) { return binary(ExprKind::Mul, std::move(l), std::move(r)); }
ExprPtr div(ExprPtr l, ExprPtr r) { return binary(ExprKind::Div, std::move(l), std::move(r)); }

ExprPtr pow(ExprPtr base, int exponent) {
    return std::make_shared<Expr>(ExprKind::Pow, 0.0, exponent, std::move(base), nullptr);
}

ExprPtr exp(ExprPtr e) { return unary(ExprKind::Exp, std::move(e)); }
ExprPtr log(ExprPtr e) { return unary(ExprKind::Log, std::move(e)); }
ExprPtr sin(ExprPtr e) { return unary(ExprKind::Sin, std::move(e)); }
ExprPtr cos(ExprPtr e) { return unary(ExprKind::Cos, std::move(e)); }
ExprPtr sqrt(ExprPtr e) { return unary(ExprKind::Sqrt, std::move(e)); }

}  // namespace ast

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::Number: return a.number == b.number;
        case ExprKind::Var: return true;
        case ExprKind::Pow:
            return a.exponent == b.exponent && structurally_equal(*a.lhs, *b.lhs);
        case ExprKind::Add:
        case ExprKind::Sub:
        case ExprKind::Mul:
        case ExprKind::Div:
            return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
        default:
            return structurally_equal(*a.lhs, *b.lhs);
    }
}

std::string format_double(double v) {
    std::array<char, 40> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    assert(ec == std::errc());
    return std::string(buf.data(), end);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Precedence classes: additive 1, multiplicative 2, power 3, atom 4.
// A negated subtree and a negative literal both print with a leading '-',
// so they rank additive.
int precedence(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Neg:
            return 1;
        case ExprKind::Number:
            return std::signbit(e.number) ? 1 : 4;
        case ExprKind::Add:
        case ExprKind::Sub:
            return 1;
        case ExprKind::Mul:
        case ExprKind::Div:
            return 2;
        case ExprKind::Pow:
            return 3;
        default:
            return 4;
    }
}

void print_rec(const Expr& e, int min_prec, std::string& out) {
    const bool parens = precedence(e) < min_prec;
    if (parens) out += '(';
    switch (e.kind) {
        case ExprKind::Number:
            out += format_double(e.number);
            break;
        case ExprKind::Var:
            out += 'x';
            break;
        case ExprKind::Neg:
            out += '-';
            print_rec(*e.lhs, 2, out);
            break;
        case ExprKind::Add:
            print_rec(*e.lhs, 1, out);
            out += " + ";
            print_rec(*e.rhs, 2, out);
            break;
        case ExprKind::Sub:
            print_rec(*e.lhs, 1, out);
            out += " - ";
            print_rec(*e.rhs, 2, out);
            break;
        case ExprKind::Mul:
            print_rec(*e.lhs, 2, out);
            out += " * ";
            print_rec(*e.rhs, 3, out);
            break;
        case ExprKind::Div:
            print_rec(*e.lhs, 2, out);
            out += " / ";
            print_rec(*e.rhs, 3, out);
            break;
        case ExprKind::Pow:
            print_rec(*e.lhs, 4, out);
            out += '^';
            out += std::to_string(e.exponent);
            break;
        case ExprKind::Exp:
        case ExprKind::Log:
        case ExprKind::Sin:
        case ExprKind::Cos:
        case ExprKind::Sqrt: {
            static const char* names[] = {"exp", "log", "sin", "cos", "sqrt"};
            out += names[static_cast<int>(e.kind) - static_cast<int>(ExprKind::Exp)];
            out += '(';
            print_rec(*e.lhs, 1, out);
            out += ')';
            break;
        }
    }
    if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print_rec(e, 1, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr run() {
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at byte " + std::to_string(pos_), pos_);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr parse_expr() {
        ExprPtr e;
        if (accept('-')) {
            e = ast::neg(parse_term());  // folds "-1" into a literal
        } else {
            e = parse_term();
        }
        for (;;) {
            if (accept('+')) {
                e = ast::add(std::move(e), parse_term());
            } else if (accept('-')) {
                e = ast::sub(std::move(e), parse_term());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        for (;;) {
            if (accept('*')) {
                e = ast::mul(std::move(e), parse_factor());
            } else if (accept('/')) {
                e = ast::div(std::move(e), parse_factor());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_base();
        if (accept('^')) {
            return ast::pow(std::move(base), parse_integer());
        }
        return base;
    }

    int parse_integer() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < src_.size() && src_[pos_] == '-') ++pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        int value = 0;
        auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != src_.data() + pos_ || pos_ == start) {
            pos_ = start;
            fail("expected integer exponent");
        }
        return value;
    }

    ExprPtr parse_base() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    ExprPtr parse_number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ == start || (pos_ == start + 1 && src_[start] == '.')) {
            pos_ = start;
            fail("malformed number");
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' belongs to something else; not part of the literal
            }
        }
        double value = 0.0;
        auto res = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
            std::size_t at = start;
            pos_ = at;
            fail("malformed number");
        }
        return ast::num(value);
    }

    ExprPtr parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);
        if (name == "x") return ast::var();
        ExprKind kind;
        if (name == "exp") kind = ExprKind::Exp;
        else if (name == "log") kind = ExprKind::Log;
        else if (name == "sin") kind = ExprKind::Sin;
        else if (name == "cos") kind = ExprKind::Cos;
        else if (name == "sqrt") kind = ExprKind::Sqrt;
        else {
            pos_ = start;
            fail("unknown identifier '" + std::string(name) + "'");
        }
        if (!accept('(')) fail("expected '(' after function name");
        ExprPtr arg = parse_expr();
        if (!accept(')')) fail("expected ')'");
        return std::make_shared<Expr>(kind, 0.0, 0, std::move(arg), nullptr);
    }
};

}  // namespace

ExprPtr parse(std::string_view source) {
    return Parser(source).run();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double ipow(double base, int n) {
    if (n < 0) {
        if (base == 0.0) throw EvalError("zero raised to a negative power");
        return 1.0 / ipow(base, -n);
    }
    double result = 1.0;
    double acc = base;
    while (n > 0) {
        if (n & 1) result *= acc;
        acc *= acc;
        n >>= 1;
    }
    return result;
}

double eval_rec(const Expr& e, double x) {
    switch (e.kind) {
        case ExprKind::Number: return e.number;
        case ExprKind::Var: return x;
        case ExprKind::Neg: return -eval_rec(*e.lhs, x);
        case ExprKind::Add: return eval_rec(*e.lhs, x) + eval_rec(*e.rhs, x);
        case ExprKind::Sub: return eval_rec(*e.lhs, x) - eval_rec(*e.rhs, x);
        case ExprKind::Mul: return eval_rec(*e.lhs, x) * eval_rec(*e.rhs, x);
        case ExprKind::Div: {
            double den = eval_rec(*e.rhs, x);
            if (den == 0.0) throw EvalError("division by zero at x = " + format_double(x));
            return eval_rec(*e.lhs, x) / den;
        }
        case ExprKind::Pow: return ipow(eval_rec(*e.lhs, x), e.exponent);
        case ExprKind::Exp: return std::exp(eval_rec(*e.lhs, x));
        case ExprKind::Log: {
            double v = eval_rec(*e.lhs, x);
            if (v <= 0.0) throw EvalError("log of nonpositive value at x = " + format_double(x));
            return std::log(v);
        }
        case ExprKind::Sin: return std::sin(eval_rec(*e.lhs, x));
        case ExprKind::Cos: return std::cos(eval_rec(*e.lhs, x));
        case ExprKind::Sqrt: {
            double v = eval_rec(*e.lhs, x);
            if (v < 0.0) throw EvalError("sqrt of negative value at x = " + format_double(x));
            return std::sqrt(v);
        }
    }
    throw EvalError("corrupt expression node");
}

}  // namespace

double eval(const Expr& e, double x) {
    double v = eval_rec(e, x);
    if (!std::isfinite(v)) {
        throw EvalError("non-finite result at x = " + format_double(x));
    }
    return v;
}

// ---------------------------------------------------------------------------
// Differentiation

namespace {

// Simplifying constructors used only when building derivative trees; the
// parser never simplifies, which keeps print/parse round trips exact.

bool is_const(const ExprPtr& e, double v) {
    return e->kind == ExprKind::Number && e->number == v;
}

ExprPtr s_neg(ExprPtr e);

ExprPtr s_add(ExprPtr l, ExprPtr r) {
    if (is_const(l, 0.0)) return r;
    if (is_const(r, 0.0)) return l;
    if (l->kind == ExprKind::Number && r->kind == ExprKind::Number) {
        double v = l->number + r->number;
        if (std::isfinite(v)) return ast::num(v);
    }
    return ast::add(std::move(l), std::move(r));
}

ExprPtr s_sub(ExprPtr l, ExprPtr r) {
    if (is_const(r, 0.0)) return l;
    if (l->kind == ExprKind::Number && r->kind == ExprKind::Number) {
        double v = l->number - r->number;
        if (std::isfinite(v)) return ast::num(v);
    }
    if (is_const(l, 0.0)) return s_neg(std::move(r));
    return ast::sub(std::move(l), std::move(r));
}

ExprPtr s_neg(ExprPtr e) {
    if (e->kind == ExprKind::Number) return ast::num(-e->number);
    if (e->kind == ExprKind::Neg) return e->lhs;
    return ast::neg(std::move(e));
}

ExprPtr s_mul(ExprPtr l, ExprPtr r) {
    if (is_const(l, 0.0) || is_const(r, 0.0)) return ast::num(0.0);
    if (is_const(l, 1.0)) return r;
    if (is_const(r, 1.0)) return l;
    if (l->kind == ExprKind::Number && r->kind == ExprKind::Number) {
        double v = l->number * r->number;
        if (std::isfinite(v)) return ast::num(v);
    }
    if (is_const(l, -1.0)) return s_neg(std::move(r));
    if (is_const(r, -1.0)) return s_neg(std::move(l));
    return ast::mul(std::move(l), std::move(r));
}

ExprPtr s_div(ExprPtr l, ExprPtr r) {
    if (is_const(r, 1.0)) return l;
    if (l->kind == ExprKind::Number && r->kind == ExprKind::Number && r->number != 0.0) {
        double v = l->number / r->number;
        if (std::isfinite(v)) return ast::num(v);
    }
    return ast::div(std::move(l), std::move(r));
}

ExprPtr s_pow(ExprPtr base, int n) {
    if (n == 0) return ast::num(1.0);
    if (n == 1) return base;
    if (base->kind == ExprKind::Number && !(base->number == 0.0 && n < 0)) {
        double v = ipow(base->number, n);
        if (std::isfinite(v)) return ast::num(v);
    }
    return ast::pow(std::move(base), n);
}

ExprPtr d(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::Number: return ast::num(0.0);
        case ExprKind::Var: return ast::num(1.0);
        case ExprKind::Neg: return s_neg(d(e->lhs));
        case ExprKind::Add: return s_add(d(e->lhs), d(e->rhs));
        case ExprKind::Sub: return s_sub(d(e->lhs), d(e->rhs));
        case ExprKind::Mul:
            return s_add(s_mul(d(e->lhs), e->rhs), s_mul(e->lhs, d(e->rhs)));
        case ExprKind::Div:
            return s_div(s_sub(s_mul(d(e->lhs), e->rhs), s_mul(e->lhs, d(e->rhs))),
                         s_pow(e->rhs, 2));
        case ExprKind::Pow:
            if (e->exponent == 0) return ast::num(0.0);
            return s_mul(s_mul(ast::num(static_cast<double>(e->exponent)),
                               s_pow(e->lhs, e->exponent - 1)),
                         d(e->lhs));
        case ExprKind::Exp: return s_mul(e, d(e->lhs));
        case ExprKind::Log: return s_div(d(e->lhs), e->lhs);
        case ExprKind::Sin: return s_mul(ast::cos(e->lhs), d(e->lhs));
        case ExprKind::Cos: return s_neg(s_mul(ast::sin(e->lhs), d(e->lhs)));
        case ExprKind::Sqrt: return s_div(d(e->lhs), s_mul(ast::num(2.0), e));
    }
    throw EvalError("corrupt expression node");
}

}  // namespace

ExprPtr differentiate(const ExprPtr& e, int order) {
    if (order < 0) throw std::invalid_argument("differentiate: negative order");
    ExprPtr cur = e;
    for (int i = 0; i < order; ++i) cur = d(cur);
    return cur;
}

}  // namespace tsys
