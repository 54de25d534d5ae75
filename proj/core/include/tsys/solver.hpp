#pragma once

#include <cstdint>
#include <vector>

#include "tsys/measure.hpp"
#include "tsys/oracle.hpp"
#include "tsys/verify.hpp"

namespace tsys {

/// Structural pattern of the extremal support for n+1 moment constraints:
/// cardinality plus forced endpoint membership, by parity of n and sense.
/// With m = floor((n+1)/2):
///   n = 2m,   Max: m+1 points, b forced;    Min: m+1 points, a forced;
///   n = 2m-1, Max: m+1 points, a,b forced;  Min: m points, none forced.
/// In every case weights + free nodes = n+1 unknowns, matching the n+1
/// moment equations.
struct SupportTemplate {
    Sense sense = Sense::Max;
    int n = 0;
    int m = 0;
    bool even = true;
    int total_points = 0;
    bool force_a = false;
    bool force_b = false;
    int free_nodes = 0;

    int unknowns() const { return total_points + free_nodes; }
};

SupportTemplate make_template(int n, Sense sense);

/// r_i = sum_k w_k g_i(x_k) - c_i for the constrained functions.
std::vector<double> moment_residuals(const FunctionSystem& sys, const MomentVector& c,
                                     const AtomicMeasure& mu);

struct NewtonOptions {
    int max_iterations = 200;
    /// Convergence when max_i |r_i| / (1 + |c_i|) falls below this.
    double tol = 1e-12;
    /// Free nodes stay inside [a + eps, b - eps], eps = factor * (b - a);
    /// a converged free node within eps of an endpoint snaps onto it.
    double clamp_eps_factor = 1e-12;
    /// Nodes closer than factor * (b - a) merge and the iteration restarts.
    double coalesce_factor = 1e-8;
    /// Weights below factor * total mass are pruned after convergence.
    double prune_factor = 1e-10;
};

struct NewtonResult {
    AtomicMeasure measure;
    double residual = 0.0;  // scaled, see NewtonOptions::tol
    int iterations = 0;
    bool converged = false;
};

/// Damped Newton iteration on the square node/weight moment system. The
/// unknowns are all weights plus the free node positions; the Jacobian
/// columns are g_i(x_k) for weights and w_k g_i'(x_k) for free nodes. Steps
/// are halved until the residual norm decreases, weights are projected to be
/// nonnegative, and free nodes are clamped to the open interval.
NewtonResult newton_solve(const FunctionSystem& sys, const MomentVector& c,
                          const SupportTemplate& tmpl, const AtomicMeasure& init,
                          const NewtonOptions& opt = {});

struct BoundConfig {
    int grid_size = 4097;
    std::uint64_t seed = 0;
    /// Proceed despite a refuted T+ sampling hypothesis.
    bool override_hypothesis = false;
    VerifyOptions verify;
    SimplexOptions simplex;
    NewtonOptions newton;
};

/// Certified bound on the objective moment.
struct BoundReport {
    Sense sense = Sense::Max;
    double value = 0.0;
    AtomicMeasure measure;
    ConePosition cone;
    double moment_residual = 0.0;
    int newton_iterations = 0;
    bool converged = false;

    bool hypothesis_ok = true;
    std::vector<Verdict> hypothesis;  // T+ checks at levels n and n+1

    SupportTemplate tmpl;
    bool singular_route = false;
    /// Forced endpoint whose weight converged to zero and was pruned.
    bool dropped_forced_a = false;
    bool dropped_forced_b = false;

    double oracle_value = 0.0;
    double oracle_gap = 0.0;
    int oracle_grid = 0;
    AtomicMeasure oracle_measure;
    std::vector<double> oracle_duals;
};

/// Full pipeline: T+ hypothesis sampling, cone classification, grid-LP
/// oracle, template construction, Newton solve, cross-checked report.
/// Singularly positive moment vectors bypass the templates: the unique
/// representing measure is polished on its own support and max = min.
/// Throws HypothesisError (unless overridden) and InfeasibleError.
BoundReport bound(const FunctionSystem& sys, const MomentVector& c, Sense sense,
                  const BoundConfig& config = {});

/// Distance between the extremal supports computed with the system objective
/// and with alt_objective (max over both senses of the matched atom distance
/// |node difference| + |weight difference|). Identical supports are the
/// prediction whenever both objectives complete a T+ system.
double objective_independence_check(const FunctionSystem& sys, const MomentVector& c,
                                    const ExprPtr& alt_objective,
                                    const BoundConfig& config = {});

/// Matched-atom support distance used by the independence check; infinity
/// when the supports have different cardinality.
double support_distance(const AtomicMeasure& lhs, const AtomicMeasure& rhs);

}  // namespace tsys
