#pragma once

#include <vector>

#include "tsys/expr.hpp"

namespace tsys {

/// Generalized moment constraints c_0..c_n, one per constrained function.
using MomentVector = std::vector<double>;

/// Ordered system of smooth functions g_0..g_{k} on a compact interval [a, b]
/// with symbolic derivatives precomputed up to a configured order.
///
/// Convention used by the moment solvers: the last function is the objective,
/// all preceding ones are the constrained functions. The verification
/// routines treat the list as plain ordered functions.
///
/// Immutable after construction; safe to share between threads.
class FunctionSystem {
public:
    /// max_derivative_order < 0 selects the default size()-1, enough for
    /// every Wronskian the verifier can ask for.
    FunctionSystem(double a, double b, std::vector<ExprPtr> functions,
                   int max_derivative_order = -1);

    double a() const { return a_; }
    double b() const { return b_; }
    int size() const { return static_cast<int>(derivatives_.size()); }
    int num_constrained() const { return size() - 1; }
    int max_derivative_order() const { return max_order_; }

    const ExprPtr& function(int i) const { return derivatives_[i][0]; }
    const ExprPtr& objective() const { return derivatives_.back()[0]; }

    /// j-th symbolic derivative of g_i; order 0 is g_i itself.
    const ExprPtr& derivative(int i, int order) const;

    double value(int i, double x) const { return eval(function(i), x); }
    double derivative_value(int i, int order, double x) const {
        return eval(derivative(i, order), x);
    }

    /// Same interval and derivative order, different function list.
    FunctionSystem with_functions(std::vector<ExprPtr> functions) const {
        return FunctionSystem(a_, b_, std::move(functions), max_order_);
    }

private:
    double a_;
    double b_;
    int max_order_;
    std::vector<std::vector<ExprPtr>> derivatives_;  // [function][order]
};

/// Divides every function by h, the measure-transform rescaling dnu = h dmu:
/// integrals of g_i/h against nu equal integrals of g_i against mu, so the
/// moment vector and the optimal value are unchanged while atom weights pick
/// up a factor h(node).
///
/// h must be strictly positive on [a, b]; this is checked by sampling on a
/// 10001-point uniform grid including both endpoints (a pragmatic check, not
/// a proof). Throws EvalError when a nonpositive sample is found.
FunctionSystem rescale(const FunctionSystem& sys, const ExprPtr& h);

}  // namespace tsys
