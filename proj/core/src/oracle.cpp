#include "tsys/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "tsys/linalg.hpp"

namespace tsys {

Grid make_grid(double a, double b, int n) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("make_grid: requires finite a < b");
    }
    if (n < 2) throw std::invalid_argument("make_grid: need at least 2 nodes");
    Grid g;
    g.nodes.resize(n);
    for (int i = 0; i < n; ++i) {
        g.nodes[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    g.nodes.front() = a;
    g.nodes.back() = b;
    return g;
}

namespace {

DenseLp build_moment_lp(const FunctionSystem& sys, const MomentVector& c,
                        const Grid& grid, Sense sense) {
    const int m = static_cast<int>(c.size());
    if (m != sys.num_constrained()) {
        throw std::invalid_argument("moment vector length must match the constrained functions");
    }
    const int cols = grid.size();
    DenseLp lp;
    lp.rows = m;
    lp.cols = cols;
    lp.sense = sense;
    lp.rhs = c;
    lp.columns.resize(static_cast<std::size_t>(m) * cols);
    lp.objective.resize(cols);
    for (int j = 0; j < cols; ++j) {
        double x = grid.nodes[j];
        for (int i = 0; i < m; ++i) {
            lp.columns[static_cast<std::size_t>(j) * m + i] = sys.value(i, x);
        }
        lp.objective[j] = eval(sys.objective(), x);
    }
    return lp;
}

AtomicMeasure extract_measure(const LpResult& res, const Grid& grid) {
    std::vector<Atom> atoms;
    double mass = 0.0;
    for (auto [j, w] : res.basic) mass += std::abs(w);
    const double drop = 1e-12 * (1.0 + mass);
    for (auto [j, w] : res.basic) {
        if (w > drop) atoms.push_back({grid.nodes[j], w});
    }
    return AtomicMeasure::from_atoms(std::move(atoms));
}

double scaled_moment_residual(const FunctionSystem& sys, const MomentVector& c,
                              const AtomicMeasure& mu) {
    double worst = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        double v = integrate(mu, sys, static_cast<int>(i)) - c[i];
        worst = std::max(worst, std::abs(v) / (1.0 + std::abs(c[i])));
    }
    return worst;
}

// Re-solves the moment system on the returned support; the simplex stops at
// its feasibility tolerance, the refit brings residuals to machine level.
AtomicMeasure refine_weights(const FunctionSystem& sys, const MomentVector& c,
                             AtomicMeasure mu) {
    const int k = mu.size();
    const int m = static_cast<int>(c.size());
    if (k == 0 || k > m) return mu;
    Matrix a(m, k);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < k; ++j) a(i, j) = sys.value(i, mu.atoms[j].node);
    }
    try {
        std::vector<double> w = solve_least_squares(std::move(a), c);
        for (int j = 0; j < k; ++j) {
            if (w[j] < 0.0) return mu;  // keep the LP weights
        }
        for (int j = 0; j < k; ++j) mu.atoms[j].weight = w[j];
    } catch (const SingularMatrixError&) {
        // keep the LP weights
    }
    return mu;
}

}  // namespace

OracleSolution solve_grid_lp(const FunctionSystem& sys, const MomentVector& c,
                             const Grid& grid, Sense sense, const SimplexOptions& opt) {
    DenseLp lp = build_moment_lp(sys, c, grid, sense);
    LpResult res = solve_lp(lp, opt);

    if (res.status == LpStatus::Infeasible) {
        throw InfeasibleError("grid moment problem is infeasible (phase-1 residual " +
                              format_double(res.phase1_objective) + ")");
    }
    if (res.status == LpStatus::Unbounded) {
        throw UnboundedError(
            "grid moment LP is unbounded; the constrained functions admit no "
            "strictly positive combination");
    }
    if (res.status == LpStatus::IterationLimit) {
        throw Error("simplex iteration limit reached");
    }

    OracleSolution sol;
    sol.sense = sense;
    sol.grid_size = grid.size();
    sol.duals = res.duals;
    sol.phase1_residual = res.phase1_objective;
    sol.iterations = res.iterations;
    sol.measure = refine_weights(sys, c, extract_measure(res, grid));
    sol.value = integrate(sol.measure, *sys.objective());

    const int n_plus_1 = static_cast<int>(c.size());
    if (sol.measure.size() > n_plus_1) {
        throw std::logic_error("oracle returned a basic solution with more than n+1 atoms");
    }
    sol.moment_residual = scaled_moment_residual(sys, c, sol.measure);
    if (sol.moment_residual > 1e-9) {
        throw Error("oracle residual " + format_double(sol.moment_residual) +
                    " exceeds tolerance");
    }
    return sol;
}

ConePosition classify_cone_position(const FunctionSystem& sys, const MomentVector& c,
                                    const Grid& grid, const SimplexOptions& opt) {
    DenseLp lp = build_moment_lp(sys, c, grid, Sense::Max);
    SimplexOptions probe = opt;
    probe.phase1_only = true;

    auto feasible = [&](const MomentVector& rhs) {
        lp.rhs = rhs;
        return solve_lp(lp, probe).status == LpStatus::Optimal;
    };

    ConePosition pos;
    if (!feasible(c)) {
        pos.classification = ConeClass::Infeasible;
        return pos;
    }

    double cnorm = 0.0;
    for (double v : c) cnorm += v * v;
    cnorm = std::sqrt(cnorm);

    const int dim = static_cast<int>(c.size());
    auto all_probes_feasible = [&](double t) {
        MomentVector probe_c = c;
        for (int i = 0; i < dim; ++i) {
            for (double sign : {1.0, -1.0}) {
                probe_c[i] = c[i] + sign * t;
                bool ok = feasible(probe_c);
                probe_c[i] = c[i];
                if (!ok) return false;
            }
        }
        return true;
    };

    // bisect the largest coordinate-ball radius still inside the cone
    double lo = 0.0;
    double hi = 1.0 + cnorm;
    if (all_probes_feasible(hi)) {
        lo = hi;
    } else {
        for (int step = 0; step < 30; ++step) {
            double mid = 0.5 * (lo + hi);
            if (all_probes_feasible(mid)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    const double tol = 1e-7 * (1.0 + cnorm);
    if (lo > tol) {
        pos.classification = ConeClass::StrictlyPositive;
        pos.interior_margin = lo;
        return pos;
    }

    pos.classification = ConeClass::SingularlyPositive;
    OracleSolution evidence = solve_grid_lp(sys, c, grid, Sense::Max, opt);
    pos.evidence = evidence.measure;
    pos.evidence_index = support_index(evidence.measure, grid.a(), grid.b());
    return pos;
}

}  // namespace tsys
