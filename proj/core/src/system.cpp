#include "tsys/system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tsys {

namespace {

constexpr int kFiniteCheckPoints = 1001;
constexpr int kRescaleCheckPoints = 10001;

double grid_point(double a, double b, int i, int count) {
    if (i == 0) return a;
    if (i == count - 1) return b;
    return a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
}

}  // namespace

FunctionSystem::FunctionSystem(double a, double b, std::vector<ExprPtr> functions,
                               int max_derivative_order)
    : a_(a), b_(b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("FunctionSystem: requires finite a < b");
    }
    if (functions.empty()) {
        throw std::invalid_argument("FunctionSystem: function list is empty");
    }
    for (const auto& f : functions) {
        if (!f) throw std::invalid_argument("FunctionSystem: null expression");
    }
    max_order_ = max_derivative_order >= 0 ? max_derivative_order
                                           : static_cast<int>(functions.size()) - 1;

    derivatives_.reserve(functions.size());
    for (auto& f : functions) {
        std::vector<ExprPtr> orders;
        orders.reserve(static_cast<std::size_t>(max_order_) + 1);
        orders.push_back(std::move(f));
        for (int j = 1; j <= max_order_; ++j) {
            orders.push_back(differentiate(orders.back(), 1));
        }
        derivatives_.push_back(std::move(orders));
    }

    // sampled finiteness check; a domain fault anywhere on the grid rejects
    // the system up front rather than surfacing mid-solve
    for (int i = 0; i < size(); ++i) {
        for (int t = 0; t < kFiniteCheckPoints; ++t) {
            double x = grid_point(a_, b_, t, kFiniteCheckPoints);
            try {
                eval(function(i), x);
            } catch (const EvalError& err) {
                throw EvalError("function g_" + std::to_string(i) +
                                " does not evaluate finitely on [a, b]: " + err.what());
            }
        }
    }
}

const ExprPtr& FunctionSystem::derivative(int i, int order) const {
    if (i < 0 || i >= size()) throw std::out_of_range("FunctionSystem: function index");
    if (order < 0 || order > max_order_) {
        throw std::out_of_range("FunctionSystem: derivative order " + std::to_string(order) +
                                " exceeds configured maximum " + std::to_string(max_order_));
    }
    return derivatives_[i][order];
}

FunctionSystem rescale(const FunctionSystem& sys, const ExprPtr& h) {
    if (!h) throw std::invalid_argument("rescale: null expression");

    for (int t = 0; t < kRescaleCheckPoints; ++t) {
        double x = grid_point(sys.a(), sys.b(), t, kRescaleCheckPoints);
        double v = eval(h, x);
        if (v <= 0.0) {
            throw EvalError("rescale: h is not strictly positive, h(" + format_double(x) +
                            ") = " + format_double(v));
        }
    }

    if (h->kind == ExprKind::Number && h->number == 1.0) {
        return sys;  // identity rescale
    }

    std::vector<ExprPtr> scaled;
    scaled.reserve(sys.size());
    for (int i = 0; i < sys.size(); ++i) {
        scaled.push_back(ast::div(sys.function(i), h));
    }
    return sys.with_functions(std::move(scaled));
}

}  // namespace tsys
