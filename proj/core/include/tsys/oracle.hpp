#pragma once

#include <optional>
#include <vector>

#include "tsys/measure.hpp"
#include "tsys/simplex.hpp"
#include "tsys/system.hpp"

namespace tsys {

/// Strictly increasing nodes spanning [a, b], both endpoints included.
struct Grid {
    std::vector<double> nodes;
    int size() const { return static_cast<int>(nodes.size()); }
    double a() const { return nodes.front(); }
    double b() const { return nodes.back(); }
};

/// Uniform grid with n >= 2 nodes; n = 2^k + 1 doubles interior density at
/// each refinement and keeps the node sets nested.
Grid make_grid(double a, double b, int n);

/// Grid-restricted moment-problem solve: the brute-force oracle.
struct OracleSolution {
    Sense sense = Sense::Max;
    double value = 0.0;
    AtomicMeasure measure;
    std::vector<double> duals;
    double phase1_residual = 0.0;
    double moment_residual = 0.0;  // max_i |sum w g_i - c_i| / (1 + |c_i|)
    long iterations = 0;
    int grid_size = 0;
};

/// Optimizes the integral of the objective (last function) over nonnegative
/// weights on the grid subject to the n+1 moment equalities. The returned
/// basic solution carries at most n+1 atoms; this is checked on every solve.
/// Throws InfeasibleError / UnboundedError.
OracleSolution solve_grid_lp(const FunctionSystem& sys, const MomentVector& c,
                             const Grid& grid, Sense sense,
                             const SimplexOptions& opt = {});

enum class ConeClass { StrictlyPositive, SingularlyPositive, Infeasible };

/// Position of the moment vector relative to the grid moment cone.
struct ConePosition {
    ConeClass classification = ConeClass::Infeasible;
    /// Strict: largest verified radius of a coordinate ball around c that
    /// stays inside the cone.
    double interior_margin = 0.0;
    /// Singular: the (grid-level) representing measure and its support index.
    std::optional<AtomicMeasure> evidence;
    std::optional<SupportIndex> evidence_index;
};

/// Feasibility probing of c +/- t e_i with a bisection on t decides between
/// interior (strict) and boundary (singular) position of c in the grid cone.
ConePosition classify_cone_position(const FunctionSystem& sys, const MomentVector& c,
                                    const Grid& grid, const SimplexOptions& opt = {});

}  // namespace tsys
