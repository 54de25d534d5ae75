#pragma once

#include <utility>
#include <vector>

#include "tsys/errors.hpp"

namespace tsys {

enum class Sense { Max, Min };

/// Linear program in equality standard form:
///   optimize objective . w   subject to   A w = rhs,  w >= 0,
/// with A stored column-major: entry(i, j) = columns[j * rows + i].
struct DenseLp {
    int rows = 0;
    int cols = 0;
    std::vector<double> columns;
    std::vector<double> objective;
    std::vector<double> rhs;
    Sense sense = Sense::Max;

    double entry(int i, int j) const {
        return columns[static_cast<std::size_t>(j) * rows + i];
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    /// Basic primal solution: (column index, value) for structural columns.
    std::vector<std::pair<int, double>> basic;
    /// Dual multipliers y in the original orientation. At optimality
    /// Max: objective[j] - y.a_j <= 0 for every column j (0 on the basis);
    /// Min: objective[j] - y.a_j >= 0.
    std::vector<double> duals;
    double phase1_objective = 0.0;
    long iterations = 0;
};

struct SimplexOptions {
    /// Phase-1 objective at or below feas_tol_scale * ||rhs||_2 declares feasibility.
    double feas_tol_scale = 1e-9;
    /// Switch to Bland's rule after bland_after_factor * columns iterations.
    long bland_after_factor = 50;
    /// Stop after phase 1; only feasibility is reported.
    bool phase1_only = false;
};

/// Two-phase dense primal simplex with partial pricing, lexicographic
/// ratio-test tie-breaking, and a Bland's-rule fallback. Built for problems
/// with few rows and many columns; every solve is deterministic.
LpResult solve_lp(const DenseLp& lp, const SimplexOptions& opt = {});

}  // namespace tsys
