#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "tsys/errors.hpp"

namespace tsys {

enum class ExprKind {
    Number,
    Var,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,  // integer exponent only
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree over one real variable `x`.
/// Built through the `ast::` factories or `parse()`; never mutated afterwards,
/// so nodes can be shared freely across threads.
class Expr {
public:
    ExprKind kind;
    double number = 0.0;  // ExprKind::Number payload
    int exponent = 0;     // ExprKind::Pow payload
    ExprPtr lhs;          // unary nodes use lhs only
    ExprPtr rhs;

    Expr(ExprKind k, double num, int expo, ExprPtr l, ExprPtr r)
        : kind(k), number(num), exponent(expo), lhs(std::move(l)), rhs(std::move(r)) {}
};

namespace ast {

ExprPtr num(double value);
ExprPtr var();
ExprPtr neg(ExprPtr e);
ExprPtr add(ExprPtr l, ExprPtr r);
ExprPtr sub(ExprPtr l, ExprPtr r);
ExprPtr mul(ExprPtr l, ExprPtr r);
ExprPtr div(ExprPtr l, ExprPtr r);
ExprPtr pow(ExprPtr base, int exponent);
ExprPtr exp(ExprPtr e);
ExprPtr log(ExprPtr e);
ExprPtr sin(ExprPtr e);
ExprPtr cos(ExprPtr e);
ExprPtr sqrt(ExprPtr e);

}  // namespace ast

bool structurally_equal(const Expr& a, const Expr& b);
inline bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    return structurally_equal(*a, *b);
}

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Canonical text form; parse(to_string(e)) is structurally identical to e.
std::string to_string(const Expr& e);
inline std::string to_string(const ExprPtr& e) { return to_string(*e); }

/// Parses the grammar
///   expr   := ['-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' integer)?
///   base   := number | 'x' | func '(' expr ')' | '(' expr ')'
///   func   := 'exp'|'log'|'sin'|'cos'|'sqrt'
/// Whitespace is insignificant; numbers are decimal literals with optional
/// exponent. A leading '-' applied to a number literal folds into the literal.
ExprPtr parse(std::string_view source);

/// Evaluates at x. Throws EvalError on domain faults (log of a nonpositive
/// value, division by zero, negative sqrt) and on non-finite results.
double eval(const Expr& e, double x);
inline double eval(const ExprPtr& e, double x) { return eval(*e, x); }

/// Exact symbolic derivative of the given order; order 0 returns e itself.
/// Total on the grammar: the node set is closed under differentiation.
ExprPtr differentiate(const ExprPtr& e, int order = 1);

}  // namespace tsys
