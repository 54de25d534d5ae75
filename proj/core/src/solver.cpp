#include "tsys/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tsys/linalg.hpp"

namespace tsys {

SupportTemplate make_template(int n, Sense sense) {
    if (n < 0) throw std::invalid_argument("make_template: n must be nonnegative");
    SupportTemplate t;
    t.sense = sense;
    t.n = n;
    t.m = (n + 1) / 2;
    t.even = (n % 2 == 0);
    if (t.even) {
        t.total_points = t.m + 1;
        t.force_b = (sense == Sense::Max);
        t.force_a = (sense == Sense::Min);
    } else if (sense == Sense::Max) {
        t.total_points = t.m + 1;
        t.force_a = true;
        t.force_b = true;
    } else {
        t.total_points = t.m;
    }
    t.free_nodes = t.total_points - (t.force_a ? 1 : 0) - (t.force_b ? 1 : 0);
    return t;
}

std::vector<double> moment_residuals(const FunctionSystem& sys, const MomentVector& c,
                                     const AtomicMeasure& mu) {
    if (static_cast<int>(c.size()) > sys.size()) {
        throw std::invalid_argument("moment_residuals: more moments than functions");
    }
    std::vector<double> r(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        r[i] = integrate(mu, sys, static_cast<int>(i)) - c[i];
    }
    return r;
}

namespace {

struct WorkAtom {
    double node = 0.0;
    double weight = 0.0;
    bool fixed = false;  // endpoint atoms keep their node
};

std::vector<double> residuals_of(const FunctionSystem& sys, const MomentVector& c,
                                 const std::vector<WorkAtom>& atoms) {
    std::vector<double> r(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        double s = 0.0;
        for (const WorkAtom& at : atoms) s += at.weight * sys.value(static_cast<int>(i), at.node);
        r[i] = s - c[i];
    }
    return r;
}

double scaled_norm(const std::vector<double>& r, const MomentVector& c) {
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        worst = std::max(worst, std::abs(r[i]) / (1.0 + std::abs(c[i])));
    }
    return worst;
}

double l2(const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return std::sqrt(s);
}

bool merge_coalesced(std::vector<WorkAtom>& atoms, double radius) {
    std::sort(atoms.begin(), atoms.end(),
              [](const WorkAtom& l, const WorkAtom& r) { return l.node < r.node; });
    for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
        if (atoms[i + 1].node - atoms[i].node >= radius) continue;
        WorkAtom merged;
        if (atoms[i].fixed) {
            merged = atoms[i];
            merged.weight += atoms[i + 1].weight;
        } else if (atoms[i + 1].fixed) {
            merged = atoms[i + 1];
            merged.weight += atoms[i].weight;
        } else {
            double w = atoms[i].weight + atoms[i + 1].weight;
            merged.node = w > 0.0
                              ? (atoms[i].node * atoms[i].weight + atoms[i + 1].node * atoms[i + 1].weight) / w
                              : 0.5 * (atoms[i].node + atoms[i + 1].node);
            merged.weight = w;
            merged.fixed = false;
        }
        atoms[i] = merged;
        atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        return true;
    }
    return false;
}

struct PolishOutcome {
    std::vector<WorkAtom> atoms;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Damped Newton on (weights, free nodes). Restarts transparently after a
// coalescence merge; gives up when a projected step cannot reduce the
// residual any further.
PolishOutcome polish(const FunctionSystem& sys, const MomentVector& c,
                     std::vector<WorkAtom> atoms, const NewtonOptions& opt,
                     int iterations_used) {
    const double a = sys.a();
    const double b = sys.b();
    const double eps = opt.clamp_eps_factor * (b - a);
    const double coalesce = opt.coalesce_factor * (b - a);
    const int rows = static_cast<int>(c.size());

    // a support richer than the equation count cannot pin its nodes; fix
    // them and fit weights only (arises only off the template route)
    {
        int unknowns = 0;
        for (const WorkAtom& at : atoms) unknowns += at.fixed ? 1 : 2;
        if (unknowns > rows) {
            for (WorkAtom& at : atoms) at.fixed = true;
        }
    }

    PolishOutcome out;
    out.atoms = atoms;
    out.residual = std::numeric_limits<double>::infinity();
    out.iterations = iterations_used;

    for (;;) {
        while (merge_coalesced(atoms, coalesce)) {
        }
        std::vector<double> r = residuals_of(sys, c, atoms);
        double res = scaled_norm(r, c);
        if (res < out.residual) {
            out.atoms = atoms;
            out.residual = res;
        }
        if (res <= opt.tol) {
            out.converged = true;
            return out;
        }
        if (out.iterations >= opt.max_iterations) return out;

        const int t_count = static_cast<int>(atoms.size());
        std::vector<int> free_idx;
        for (int k = 0; k < t_count; ++k) {
            if (!atoms[k].fixed) free_idx.push_back(k);
        }
        const int cols = t_count + static_cast<int>(free_idx.size());
        if (cols == 0 || cols > rows) return out;

        Matrix jac(rows, cols);
        for (int i = 0; i < rows; ++i) {
            for (int k = 0; k < t_count; ++k) jac(i, k) = sys.value(i, atoms[k].node);
            for (std::size_t f = 0; f < free_idx.size(); ++f) {
                const WorkAtom& at = atoms[free_idx[f]];
                jac(i, t_count + static_cast<int>(f)) =
                    at.weight * eval(sys.derivative(i, 1), at.node);
            }
        }
        std::vector<double> neg_r(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) neg_r[i] = -r[i];

        std::vector<double> delta;
        try {
            delta = solve_least_squares(jac, neg_r);
        } catch (const SingularMatrixError&) {
            // a dead atom (zero weight, free node) produces a zero Jacobian
            // column; prune it and retry
            double mass = 0.0;
            for (const WorkAtom& at : atoms) mass += at.weight;
            const double floor = opt.prune_factor * std::max(mass, 1.0);
            std::size_t before = atoms.size();
            std::erase_if(atoms, [&](const WorkAtom& at) { return at.weight <= floor; });
            ++out.iterations;
            if (atoms.size() == before) return out;
            continue;
        }

        const double r_norm = l2(r);
        bool accepted = false;
        std::vector<WorkAtom> cand;
        for (double alpha = 1.0; alpha >= 0x1p-40; alpha *= 0.5) {
            cand = atoms;
            for (int k = 0; k < t_count; ++k) {
                cand[k].weight = std::max(0.0, atoms[k].weight + alpha * delta[k]);
            }
            for (std::size_t f = 0; f < free_idx.size(); ++f) {
                int k = free_idx[f];
                cand[k].node = std::clamp(atoms[k].node + alpha * delta[t_count + static_cast<int>(f)],
                                          a + eps, b - eps);
            }
            double rc = l2(residuals_of(sys, c, cand));
            if (rc < r_norm * (1.0 - 1e-12)) {
                accepted = true;
                break;
            }
        }
        ++out.iterations;
        if (!accepted) return out;  // stalled; best iterate already recorded
        atoms = std::move(cand);
    }
}

// Snap converged free nodes that pressed against an endpoint clamp onto the
// endpoint and re-polish with the node fixed.
PolishOutcome polish_with_snapping(const FunctionSystem& sys, const MomentVector& c,
                                   std::vector<WorkAtom> atoms, const NewtonOptions& opt) {
    const double a = sys.a();
    const double b = sys.b();
    const double snap = 2.0 * opt.clamp_eps_factor * (b - a);

    PolishOutcome out;
    int used = 0;
    for (int round = 0; round < 3; ++round) {
        out = polish(sys, c, atoms, opt, used);
        used = out.iterations;
        if (!out.converged) return out;
        bool snapped = false;
        for (WorkAtom& at : out.atoms) {
            if (at.fixed) continue;
            if (at.node - a <= snap) {
                at.node = a;
                at.fixed = true;
                snapped = true;
            } else if (b - at.node <= snap) {
                at.node = b;
                at.fixed = true;
                snapped = true;
            }
        }
        if (!snapped) return out;
        atoms = out.atoms;
    }
    return out;
}

NewtonResult finish(const FunctionSystem& sys, const MomentVector& c, const PolishOutcome& out,
                    const NewtonOptions& opt) {
    NewtonResult res;
    res.iterations = out.iterations;
    res.converged = out.converged;

    double mass = 0.0;
    for (const WorkAtom& at : out.atoms) mass += at.weight;
    const double drop = out.converged ? opt.prune_factor * std::max(mass, 1e-300) : 0.0;

    std::vector<Atom> atoms;
    for (const WorkAtom& at : out.atoms) atoms.push_back({at.node, at.weight});
    res.measure = AtomicMeasure::from_atoms(std::move(atoms), drop);
    res.residual = scaled_norm(moment_residuals(sys, c, res.measure), c);
    return res;
}

std::vector<Atom> cluster_atoms(const AtomicMeasure& mu, double radius) {
    std::vector<Atom> out;
    for (const Atom& at : mu.atoms) {
        if (!out.empty() && at.node - out.back().node <= radius) {
            double w = out.back().weight + at.weight;
            out.back().node = (out.back().node * out.back().weight + at.node * at.weight) / w;
            out.back().weight = w;
        } else {
            out.push_back(at);
        }
    }
    return out;
}

// Maps the oracle's grid atoms onto the support template: straddling pairs
// collapse to clusters, clusters near a forced endpoint fold into it, and the
// interior clusters are condensed or padded to exactly the free-slot count.
AtomicMeasure map_to_template(const AtomicMeasure& oracle, const SupportTemplate& t,
                              double a, double b, double grid_h) {
    const double mass = oracle.total_mass();
    const double snap = std::max(2.0 * grid_h, 1e-9 * (b - a));
    const double margin = 1e-9 * (b - a);

    std::vector<Atom> clusters = cluster_atoms(oracle, 1.5 * grid_h);

    double w_a = 0.0;
    double w_b = 0.0;
    std::vector<Atom> interior;
    for (const Atom& cl : clusters) {
        if (t.force_a && cl.node <= a + snap) {
            w_a += cl.weight;
        } else if (t.force_b && cl.node >= b - snap) {
            w_b += cl.weight;
        } else {
            interior.push_back(cl);
        }
    }

    while (static_cast<int>(interior.size()) > t.free_nodes) {
        if (interior.size() == 1) {
            // no free slot left for it; hand the mass to the nearer forced endpoint
            if (t.force_a && (!t.force_b || interior[0].node - a <= b - interior[0].node)) {
                w_a += interior[0].weight;
            } else if (t.force_b) {
                w_b += interior[0].weight;
            }
            interior.clear();
            break;
        }
        std::size_t best = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < interior.size(); ++i) {
            double gap = interior[i + 1].node - interior[i].node;
            if (gap < best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        double w = interior[best].weight + interior[best + 1].weight;
        interior[best].node = w > 0.0 ? (interior[best].node * interior[best].weight +
                                         interior[best + 1].node * interior[best + 1].weight) /
                                            w
                                      : 0.5 * (interior[best].node + interior[best + 1].node);
        interior[best].weight = w;
        interior.erase(interior.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    }

    std::vector<char> inserted(interior.size(), 0);
    while (static_cast<int>(interior.size()) < t.free_nodes) {
        std::vector<double> seq;
        seq.push_back(a);
        for (const Atom& at : interior) seq.push_back(at.node);
        seq.push_back(b);
        std::size_t best = 0;
        double best_gap = -1.0;
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            double gap = seq[i + 1] - seq[i];
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        double mid = 0.5 * (seq[best] + seq[best + 1]);
        auto pos = std::lower_bound(interior.begin(), interior.end(), mid,
                                    [](const Atom& at, double v) { return at.node < v; });
        inserted.insert(inserted.begin() + (pos - interior.begin()), 1);
        interior.insert(pos, Atom{mid, 0.0});
    }

    const double insert_w = mass > 0.0 ? 1e-3 * mass : 1.0;
    double added = 0.0;
    for (std::size_t i = 0; i < interior.size(); ++i) {
        if (inserted[i] || interior[i].weight == 0.0) {
            added += insert_w - interior[i].weight;
            interior[i].weight = insert_w;
        }
    }
    if (t.force_a && w_a == 0.0) {
        w_a = insert_w;
        added += insert_w;
    }
    if (t.force_b && w_b == 0.0) {
        w_b = insert_w;
        added += insert_w;
    }
    if (added > 0.0 && mass > added) {
        // keep the total mass, shaving the inserted mass off the real atoms
        double scale = (mass - added) / mass;
        for (std::size_t i = 0; i < interior.size(); ++i) {
            if (!inserted[i]) interior[i].weight *= scale;
        }
        w_a = t.force_a && w_a != insert_w ? w_a * scale : w_a;
        w_b = t.force_b && w_b != insert_w ? w_b * scale : w_b;
    }

    std::vector<Atom> atoms;
    if (t.force_a) atoms.push_back({a, w_a});
    for (Atom at : interior) {
        at.node = std::clamp(at.node, a + margin, b - margin);
        atoms.push_back(at);
    }
    if (t.force_b) atoms.push_back({b, w_b});
    return AtomicMeasure::from_atoms(std::move(atoms));
}

std::vector<WorkAtom> work_atoms_from_template(const AtomicMeasure& init,
                                               const SupportTemplate& t, double a, double b) {
    if (init.size() != t.total_points) {
        throw std::invalid_argument("newton_solve: init does not match the template cardinality");
    }
    const double tol = 1e-9 * (b - a);
    std::vector<WorkAtom> atoms;
    for (int k = 0; k < init.size(); ++k) {
        const Atom& at = init.atoms[k];
        WorkAtom w{at.node, at.weight, false};
        if (t.force_a && k == 0) {
            if (std::abs(at.node - a) > tol) {
                throw std::invalid_argument("newton_solve: template forces an atom at a");
            }
            w.node = a;
            w.fixed = true;
        }
        if (t.force_b && k == init.size() - 1) {
            if (std::abs(at.node - b) > tol) {
                throw std::invalid_argument("newton_solve: template forces an atom at b");
            }
            w.node = b;
            w.fixed = true;
        }
        atoms.push_back(w);
    }
    return atoms;
}

NewtonResult polish_measure(const FunctionSystem& sys, const MomentVector& c,
                            const AtomicMeasure& start, double grid_h,
                            const NewtonOptions& opt) {
    const double a = sys.a();
    const double b = sys.b();
    const double endpoint_tol = 1e-9 * (b - a);

    std::vector<WorkAtom> atoms;
    for (const Atom& at : cluster_atoms(start, 1.5 * grid_h)) {
        WorkAtom w{at.node, at.weight, false};
        if (std::abs(at.node - a) <= endpoint_tol) {
            w.node = a;
            w.fixed = true;
        } else if (std::abs(at.node - b) <= endpoint_tol) {
            w.node = b;
            w.fixed = true;
        }
        atoms.push_back(w);
    }
    return finish(sys, c, polish_with_snapping(sys, c, std::move(atoms), opt), opt);
}

}  // namespace

NewtonResult newton_solve(const FunctionSystem& sys, const MomentVector& c,
                          const SupportTemplate& tmpl, const AtomicMeasure& init,
                          const NewtonOptions& opt) {
    if (static_cast<int>(c.size()) != tmpl.n + 1) {
        throw std::invalid_argument("newton_solve: moment count does not match the template");
    }
    std::vector<WorkAtom> atoms = work_atoms_from_template(init, tmpl, sys.a(), sys.b());
    return finish(sys, c, polish_with_snapping(sys, c, std::move(atoms), opt), opt);
}

BoundReport bound(const FunctionSystem& sys, const MomentVector& c, Sense sense,
                  const BoundConfig& config) {
    const int n = static_cast<int>(c.size()) - 1;
    if (n < 0) throw std::invalid_argument("bound: empty moment vector");
    if (sys.num_constrained() != n + 1) {
        throw std::invalid_argument(
            "bound: moment vector length must match the constrained functions");
    }

    BoundReport rep;
    rep.sense = sense;
    rep.tmpl = make_template(n, sense);

    VerifyOptions vopt = config.verify;
    vopt.seed = config.seed;
    rep.hypothesis.push_back(check_tplus(sys, n, vopt));
    rep.hypothesis.push_back(check_tplus(sys, n + 1, vopt));
    rep.hypothesis_ok = true;
    for (const Verdict& v : rep.hypothesis) {
        if (v.status != VerdictStatus::VerifiedPlus) rep.hypothesis_ok = false;
    }
    if (!rep.hypothesis_ok && !config.override_hypothesis) {
        std::string msg = "T+ hypothesis not verified:";
        for (const Verdict& v : rep.hypothesis) {
            msg += " level ";
            msg += std::to_string(v.level);
            msg += " ";
            msg += to_string(v.status);
            msg += ";";
        }
        throw HypothesisError(msg);
    }

    Grid grid = make_grid(sys.a(), sys.b(), config.grid_size);
    rep.cone = classify_cone_position(sys, c, grid, config.simplex);
    if (rep.cone.classification == ConeClass::Infeasible) {
        throw InfeasibleError("moment vector lies outside the grid moment cone");
    }

    OracleSolution oracle = solve_grid_lp(sys, c, grid, sense, config.simplex);
    rep.oracle_value = oracle.value;
    rep.oracle_grid = grid.size();
    rep.oracle_measure = oracle.measure;
    rep.oracle_duals = oracle.duals;

    const double grid_h = (sys.b() - sys.a()) / static_cast<double>(grid.size() - 1);

    NewtonResult nres;
    if (rep.cone.classification == ConeClass::SingularlyPositive) {
        // boundary moment vector: the representing measure is unique, so max
        // and min coincide; polish the oracle atoms on their own support
        rep.singular_route = true;
        nres = polish_measure(sys, c, oracle.measure, grid_h, config.newton);
    } else {
        AtomicMeasure init = map_to_template(oracle.measure, rep.tmpl, sys.a(), sys.b(), grid_h);
        nres = newton_solve(sys, c, rep.tmpl, init, config.newton);
    }

    rep.measure = nres.measure;
    rep.converged = nres.converged;
    rep.newton_iterations = nres.iterations;
    rep.moment_residual = nres.residual;
    rep.value = integrate(rep.measure, *sys.objective());
    rep.oracle_gap = std::abs(rep.value - rep.oracle_value);

    if (!rep.singular_route) {
        if (rep.measure.size() > rep.tmpl.total_points) {
            throw std::logic_error("bound: support exceeds the template cardinality");
        }
        const double tol = 1e-9 * (sys.b() - sys.a());
        auto has_atom_at = [&](double x) {
            for (const Atom& at : rep.measure.atoms) {
                if (std::abs(at.node - x) <= tol) return true;
            }
            return false;
        };
        rep.dropped_forced_a = rep.tmpl.force_a && !has_atom_at(sys.a());
        rep.dropped_forced_b = rep.tmpl.force_b && !has_atom_at(sys.b());
    }
    return rep;
}

double support_distance(const AtomicMeasure& lhs, const AtomicMeasure& rhs) {
    // ignore dust so that a pruning difference between two runs does not
    // dominate the metric
    auto strip = [](const AtomicMeasure& m) {
        const double floor = 1e-8 * std::max(m.total_mass(), 1.0);
        std::vector<Atom> out;
        for (const Atom& at : m.atoms) {
            if (at.weight > floor) out.push_back(at);
        }
        return out;
    };
    std::vector<Atom> l = strip(lhs);
    std::vector<Atom> r = strip(rhs);
    if (l.size() != r.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        worst = std::max(worst, std::abs(l[i].node - r[i].node) +
                                    std::abs(l[i].weight - r[i].weight));
    }
    return worst;
}

double objective_independence_check(const FunctionSystem& sys, const MomentVector& c,
                                    const ExprPtr& alt_objective, const BoundConfig& config) {
    std::vector<ExprPtr> funcs;
    funcs.reserve(sys.size());
    for (int i = 0; i < sys.num_constrained(); ++i) funcs.push_back(sys.function(i));
    funcs.push_back(alt_objective);
    FunctionSystem alt = sys.with_functions(std::move(funcs));

    double worst = 0.0;
    for (Sense sense : {Sense::Max, Sense::Min}) {
        BoundReport base = bound(sys, c, sense, config);
        BoundReport other = bound(alt, c, sense, config);
        worst = std::max(worst, support_distance(base.measure, other.measure));
    }
    return worst;
}

}  // namespace tsys
