// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Every tolerance is pinned in the checks below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tsys/commands.hpp"

using namespace tsys;
using Clock = std::chrono::steady_clock;

namespace {

struct Checker {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

FunctionSystem monomial_system(double a, double b, int n, const std::string& objective) {
    std::vector<ExprPtr> funcs;
    funcs.push_back(parse("1"));
    for (int d = 1; d <= n; ++d) funcs.push_back(parse("x^" + std::to_string(d)));
    funcs.push_back(parse(objective));
    return FunctionSystem(a, b, std::move(funcs));
}

const MomentVector kUniformMoments = {1.0, 0.5, 1.0 / 3.0, 0.25};

struct RandomInstance {
    int n = 0;
    FunctionSystem sys;
    MomentVector c;
};

// feasible strict instances: moments of random 10-atom measures against
// monomial constraints
std::vector<RandomInstance> random_suite(int count) {
    std::mt19937_64 rng(20250810);
    std::uniform_real_distribution<double> node_dist(0.02, 0.98);
    std::uniform_real_distribution<double> weight_dist(0.1, 1.0);
    std::vector<RandomInstance> out;
    for (int i = 0; i < count; ++i) {
        int n = 1 + i % 4;
        std::vector<Atom> atoms;
        for (int k = 0; k < 10; ++k) atoms.push_back({node_dist(rng), weight_dist(rng)});
        AtomicMeasure source = AtomicMeasure::from_atoms(std::move(atoms));
        FunctionSystem sys = monomial_system(0.0, 1.0, n, "x^" + std::to_string(n + 1));
        MomentVector c;
        for (int j = 0; j <= n; ++j) c.push_back(integrate(source, sys, j));
        out.push_back({n, std::move(sys), std::move(c)});
    }
    return out;
}

BoundConfig suite_config() {
    BoundConfig cfg;
    cfg.grid_size = 1025;
    cfg.verify.quasi_tuples = 256;
    cfg.verify.random_tuples = 256;
    return cfg;
}

// shared across criteria 5, 6 and 8
struct SuiteRun {
    std::vector<RandomInstance> instances;
    std::vector<BoundReport> max_reports;
    std::vector<BoundReport> min_reports;
};

SuiteRun run_suite() {
    SuiteRun run;
    run.instances = random_suite(50);
    BoundConfig cfg = suite_config();
    for (const RandomInstance& inst : run.instances) {
        run.max_reports.push_back(bound(inst.sys, inst.c, Sense::Max, cfg));
        run.min_reports.push_back(bound(inst.sys, inst.c, Sense::Min, cfg));
    }
    return run;
}

bool has_atom_at(const AtomicMeasure& m, double x) {
    for (const Atom& at : m.atoms) {
        if (std::abs(at.node - x) <= 1e-9) return true;
    }
    return false;
}

}  // namespace

int main() {
    int failures = 0;
    SuiteRun suite;  // filled by criterion 5, reused by 6 and 8
    std::vector<OracleSolution> tracked_oracle_solves;

    auto report = [&](int id, const std::string& label, const Checker& c, double seconds) {
        std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", id,
                    label.c_str(), seconds, c.ok ? "" : " — ", c.ok ? "" : c.detail.c_str());
        if (!c.ok) ++failures;
    };

    auto timed = [&](int id, const std::string& label,
                     const std::function<void(Checker&)>& body) {
        Checker c;
        auto t0 = Clock::now();
        try {
            body(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        report(id, label, c, seconds);
        return seconds;
    };

    // 1. increasing objective with a single mass constraint: exact endpoint atoms
    timed(1, "single-constraint exactness", [&](Checker& c) {
        auto t0 = Clock::now();
        FunctionSystem sys(0.0, 1.0, {parse("1"), parse("x")});
        BoundConfig cfg = suite_config();
        BoundReport mx = bound(sys, {1.0}, Sense::Max, cfg);
        BoundReport mn = bound(sys, {1.0}, Sense::Min, cfg);
        double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        c.require(std::abs(mx.value - 1.0) <= 1e-12, "max value not 1 within 1e-12");
        c.require(mx.measure.size() == 1 && std::abs(mx.measure.atoms[0].node - 1.0) <= 1e-12 &&
                      std::abs(mx.measure.atoms[0].weight - 1.0) <= 1e-12,
                  "max measure is not the unit atom at b");
        c.require(std::abs(mn.value) <= 1e-12, "min value not 0 within 1e-12");
        c.require(mn.measure.size() == 1 && std::abs(mn.measure.atoms[0].node) <= 1e-12 &&
                      std::abs(mn.measure.atoms[0].weight - 1.0) <= 1e-12,
                  "min measure is not the unit atom at a");
        c.require(seconds < 1.0, "runtime exceeded 1 s");
    });

    // 2. convex objective with mass+mean constraints: endpoint weights match
    //    the closed forms, the degenerate zero-mass case returns the zero measure
    timed(2, "two-constraint exactness and the zero-mass case", [&](Checker& c) {
        FunctionSystem sys(0.0, 1.0, {parse("1"), parse("x"), parse("x^2")});
        MomentVector cm = {1.0, 0.5};
        const double a = 0.0, b = 1.0;
        BoundConfig cfg = suite_config();
        BoundReport mx = bound(sys, cm, Sense::Max, cfg);
        c.require(std::abs(mx.value - 0.5) <= 1e-10, "max value not 0.5");
        c.require(mx.measure.size() == 2, "max support is not the endpoint pair");
        if (mx.measure.size() == 2) {
            double wa = (cm[0] * b - cm[1]) / (b - a);
            double wb = (cm[1] - cm[0] * a) / (b - a);
            c.require(std::abs(mx.measure.atoms[0].node - 0.0) <= 1e-12 &&
                          std::abs(mx.measure.atoms[0].weight - wa) <= 1e-10,
                      "weight at a does not match (c0 b - c1)/(b - a)");
            c.require(std::abs(mx.measure.atoms[1].node - 1.0) <= 1e-12 &&
                          std::abs(mx.measure.atoms[1].weight - wb) <= 1e-10,
                      "weight at b does not match (c1 - c0 a)/(b - a)");
        }
        BoundReport mn = bound(sys, cm, Sense::Min, cfg);
        c.require(std::abs(mn.value - 0.25) <= 1e-10, "min value not 0.25");
        c.require(mn.measure.size() == 1 &&
                      std::abs(mn.measure.atoms[0].node - 0.5) <= 1e-10 &&
                      std::abs(mn.measure.atoms[0].weight - 1.0) <= 1e-10,
                  "min measure is not the unit atom at c1/c0");

        for (Sense s : {Sense::Max, Sense::Min}) {
            BoundReport zero = bound(sys, {0.0, 0.0}, s, cfg);
            c.require(zero.measure.empty() && zero.value == 0.0,
                      "zero-mass case did not return the zero measure");
        }
    });

    // 3. oracle-solver agreement on the uniform-moment quartic instance
    timed(3, "oracle agreement at grid 16385", [&](Checker& c) {
        auto t0 = Clock::now();
        FunctionSystem sys = monomial_system(0.0, 1.0, 3, "x^4");
        BoundConfig cfg;
        cfg.grid_size = 4097;
        BoundReport mx = bound(sys, kUniformMoments, Sense::Max, cfg);
        BoundReport mn = bound(sys, kUniformMoments, Sense::Min, cfg);
        c.require(mx.converged && mn.converged, "newton did not converge");
        c.require(mx.moment_residual <= 1e-12, "max moment residual above 1e-12");
        c.require(mn.moment_residual <= 1e-12, "min moment residual above 1e-12");

        Grid fine = make_grid(0.0, 1.0, 16385);
        OracleSolution omax = solve_grid_lp(sys, kUniformMoments, fine, Sense::Max);
        OracleSolution omin = solve_grid_lp(sys, kUniformMoments, fine, Sense::Min);
        tracked_oracle_solves.push_back(omax);
        tracked_oracle_solves.push_back(omin);
        c.require(std::abs(mx.value - omax.value) <= 1e-4, "max disagrees with the oracle");
        c.require(std::abs(mn.value - omin.value) <= 1e-4, "min disagrees with the oracle");
        double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        c.require(seconds < 30.0, "runtime exceeded 30 s");
    });

    // 4. the extremal support does not depend on the objective
    timed(4, "objective independence (x^4 vs exp(x))", [&](Checker& c) {
        FunctionSystem sys = monomial_system(0.0, 1.0, 3, "x^4");
        BoundConfig cfg;
        cfg.grid_size = 4097;
        double dist = objective_independence_check(sys, kUniformMoments, parse("exp(x)"), cfg);
        c.require(dist <= 1e-6,
                  "support distance " + format_double(dist) + " exceeds 1e-6");
    });

    // 5. support structure across 50 random strict instances
    timed(5, "support templates on 50 random instances", [&](Checker& c) {
        suite = run_suite();
        for (std::size_t i = 0; i < suite.instances.size(); ++i) {
            const RandomInstance& inst = suite.instances[i];
            const BoundReport& mx = suite.max_reports[i];
            const BoundReport& mn = suite.min_reports[i];
            const int m = (inst.n + 1) / 2;
            std::string tag = " (instance " + std::to_string(i) + ", n = " +
                              std::to_string(inst.n) + ")";

            c.require(mx.converged && mn.converged, "no convergence" + tag);
            c.require(!mx.singular_route && !mn.singular_route,
                      "instance unexpectedly classified singular" + tag);
            c.require(mn.value <= mx.value + 1e-10, "min exceeded max" + tag);

            c.require(mx.measure.size() <= m + 1, "max support too large" + tag);
            int min_cap = inst.n % 2 == 0 ? m + 1 : m;
            c.require(mn.measure.size() <= min_cap, "min support too large" + tag);

            // forced endpoints: present unless flagged as pruned at zero weight
            if (inst.n % 2 == 0) {
                c.require(has_atom_at(mx.measure, 1.0) || mx.dropped_forced_b,
                          "max measure misses the forced atom at b" + tag);
                c.require(has_atom_at(mn.measure, 0.0) || mn.dropped_forced_a,
                          "min measure misses the forced atom at a" + tag);
            } else {
                c.require(has_atom_at(mx.measure, 0.0) || mx.dropped_forced_a,
                          "max measure misses the forced atom at a" + tag);
                c.require(has_atom_at(mx.measure, 1.0) || mx.dropped_forced_b,
                          "max measure misses the forced atom at b" + tag);
            }
        }
    });

    // 6. Caratheodory bound on every tracked oracle solve
    timed(6, "oracle support sizes never exceed n+1", [&](Checker& c) {
        c.require(!suite.instances.empty(), "suite unavailable");
        c.require(tracked_oracle_solves.size() == 2, "criterion 3 oracle solves unavailable");
        for (const OracleSolution& sol : tracked_oracle_solves) {
            c.require(sol.measure.size() <= 4, "criterion-3 oracle exceeded n+1 atoms");
        }
        for (std::size_t i = 0; i < suite.instances.size(); ++i) {
            int cap = suite.instances[i].n + 1;
            c.require(suite.max_reports[i].oracle_measure.size() <= cap,
                      "max oracle support exceeded n+1 (instance " + std::to_string(i) + ")");
            c.require(suite.min_reports[i].oracle_measure.size() <= cap,
                      "min oracle support exceeded n+1 (instance " + std::to_string(i) + ")");
        }
    });

    // 7. singular dichotomy for the moments of a single interior atom
    timed(7, "singular moment vector", [&](Checker& c) {
        FunctionSystem sys = monomial_system(0.0, 1.0, 2, "x^3");
        MomentVector cm = {1.0, 0.3, 0.09};
        BoundConfig cfg;
        cfg.grid_size = 1001;  // the atom at 0.3 is a grid node

        Grid grid = make_grid(0.0, 1.0, cfg.grid_size);
        ConePosition pos = classify_cone_position(sys, cm, grid, cfg.simplex);
        c.require(pos.classification == ConeClass::SingularlyPositive,
                  "not classified singularly positive");
        c.require(pos.evidence_index.has_value() && pos.evidence_index->index() == 2,
                  "evidence support index is not 2");

        BoundReport mx = bound(sys, cm, Sense::Max, cfg);
        BoundReport mn = bound(sys, cm, Sense::Min, cfg);
        c.require(std::abs(mx.value - 0.027) <= 1e-6, "max differs from 0.027");
        c.require(std::abs(mn.value - 0.027) <= 1e-6, "min differs from 0.027");
        c.require(mx.singular_route && mn.singular_route, "singular route not taken");
    });

    // 8. Wronskian criterion and cross-method consistency
    timed(8, "wronskian criterion and verdict consistency", [&](Checker& c) {
        VerifyOptions vopt;
        vopt.quasi_tuples = 256;
        vopt.random_tuples = 256;

        FunctionSystem monos(0.0, 1.0,
                             {parse("1"), parse("x"), parse("x^2"), parse("x^3"),
                              parse("x^4"), parse("x^5"), parse("x^6")});
        Verdict plus = check_mplus_wronskian(monos, 6, vopt);
        c.require(plus.status == VerdictStatus::VerifiedPlus,
                  "monomials to degree 6 did not verify via Wronskians");

        FunctionSystem gap(-1.0, 1.0, {parse("1"), parse("x"), parse("x^3")});
        Verdict refuted = check_mplus_wronskian(gap, 2, vopt);
        c.require(refuted.status == VerdictStatus::Refuted, "cubic-gap system not refuted");
        c.require(refuted.witness.has_value() && refuted.witness->nodes.size() == 1 &&
                      refuted.witness->nodes[0] > -1.0 && refuted.witness->nodes[0] < 0.0 &&
                      refuted.witness->determinant < 0.0,
                  "missing interior witness with a negative Wronskian");

        // the two criteria never contradict on the random suite
        c.require(!suite.instances.empty(), "suite unavailable");
        for (std::size_t i = 0; i < suite.instances.size(); ++i) {
            const FunctionSystem& sys = suite.instances[i].sys;
            int top = sys.size() - 1;
            Verdict w = check_mplus_wronskian(sys, top, vopt);
            if (w.status == VerdictStatus::VerifiedPlus) {
                for (int k = 0; k <= top; ++k) {
                    Verdict t = check_tplus(sys, k, vopt);
                    c.require(t.status == VerdictStatus::VerifiedPlus,
                              "determinant sampling contradicts the Wronskian verdict "
                              "(instance " + std::to_string(i) + ", level " +
                              std::to_string(k) + ")");
                }
            }
        }
    });

    std::printf("acceptance: %d/8 criteria passed\n", 8 - failures);
    return failures;
}
