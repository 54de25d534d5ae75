#include "tsys/commands.hpp"

#include <nlohmann/json.hpp>

namespace tsys {

const char* to_string(Sense sense) { return sense == Sense::Max ? "max" : "min"; }

namespace {

using nlohmann::json;

BoundConfig make_config(const ProblemSpec& spec, const GlobalFlags& flags) {
    BoundConfig cfg;
    cfg.grid_size = spec.options.grid;
    cfg.seed = flags.seed ? *flags.seed : spec.options.seed.value_or(0);
    cfg.override_hypothesis = flags.override_hypothesis;
    double tol = flags.tol ? *flags.tol : spec.options.tol.value_or(0.0);
    if (tol > 0.0) cfg.verify.tol_factor = tol;
    cfg.verify.seed = cfg.seed;
    return cfg;
}

std::string join_nodes(const std::vector<double>& nodes) {
    std::string s;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) s += ' ';
        s += format_double(nodes[i]);
    }
    return s;
}

json verdict_json(const Verdict& v) {
    json j;
    j["level"] = v.level;
    j["status"] = to_string(v.status);
    j["method"] = to_string(v.method);
    j["sample_size"] = v.sample_size;
    j["seed"] = v.seed;
    if (v.witness) {
        j["witness"] = {{"nodes", v.witness->nodes},
                        {"determinant", v.witness->determinant}};
    }
    return j;
}

std::string verdict_text(const Verdict& v) {
    std::string s = to_string(v.status);
    s += " (";
    s += to_string(v.method);
    s += ", sample ";
    s += std::to_string(v.sample_size);
    s += ", seed ";
    s += std::to_string(v.seed);
    s += ")";
    if (v.witness) {
        s += " witness [" + join_nodes(v.witness->nodes) + "] det " +
             format_double(v.witness->determinant);
    }
    return s;
}

json measure_json(const AtomicMeasure& m) {
    json arr = json::array();
    for (const Atom& at : m.atoms) {
        arr.push_back({{"node", at.node}, {"weight", at.weight}});
    }
    return arr;
}

std::string cone_text(const ConePosition& cone) {
    switch (cone.classification) {
        case ConeClass::StrictlyPositive:
            return "strictly-positive margin=" + format_double(cone.interior_margin);
        case ConeClass::SingularlyPositive: {
            std::string s = "singularly-positive";
            if (cone.evidence_index) {
                s += " index=" + std::to_string(cone.evidence_index->index());
            }
            return s;
        }
        case ConeClass::Infeasible: return "infeasible";
    }
    return "?";
}

json cone_json(const ConePosition& cone) {
    json j;
    switch (cone.classification) {
        case ConeClass::StrictlyPositive:
            j["classification"] = "strictly-positive";
            j["interior_margin"] = cone.interior_margin;
            break;
        case ConeClass::SingularlyPositive:
            j["classification"] = "singularly-positive";
            if (cone.evidence) j["evidence"] = measure_json(*cone.evidence);
            if (cone.evidence_index) {
                j["support_index"] = {{"at_a", cone.evidence_index->at_a},
                                      {"interior", cone.evidence_index->interior},
                                      {"at_b", cone.evidence_index->at_b},
                                      {"index", cone.evidence_index->index()}};
            }
            break;
        case ConeClass::Infeasible:
            j["classification"] = "infeasible";
            break;
    }
    return j;
}

std::string template_text(const SupportTemplate& t) {
    std::string forced;
    if (t.force_a) forced += "a";
    if (t.force_b) forced += forced.empty() ? "b" : ",b";
    return "points=" + std::to_string(t.total_points) + " forced={" + forced +
           "} free=" + std::to_string(t.free_nodes);
}

CommandResult failure(int code, const std::string& message, bool as_json,
                      const std::string& command) {
    CommandResult res;
    res.exit_code = code;
    if (as_json) {
        json j;
        j["command"] = command;
        j["error"] = message;
        j["exit"] = code;
        res.output = j.dump(2) + "\n";
    } else {
        res.output = "error: " + message + "\n";
    }
    return res;
}

}  // namespace

CommandResult cmd_verify(const ProblemSpec& spec, const GlobalFlags& flags) {
    try {
        BoundConfig cfg = make_config(spec, flags);
        FunctionSystem sys = spec.make_system();
        const int top = sys.size() - 1;  // ladder levels 0..n+1

        std::vector<Verdict> ladder;
        bool refuted = false;
        for (int k = 0; k <= top; ++k) {
            ladder.push_back(check_tplus(sys, k, cfg.verify));
            if (ladder.back().status == VerdictStatus::Refuted) {
                refuted = true;
                break;
            }
        }

        SignVector signs;
        std::optional<Verdict> wronskian_verdict;
        std::optional<PositivityCertificate> cert;
        if (!refuted) {
            int prev_sigma = 1;
            for (const Verdict& v : ladder) {
                int sigma = v.status == VerdictStatus::VerifiedPlus ? 1 : -1;
                signs.signs.push_back(sigma * prev_sigma);
                prev_sigma = sigma;
            }
            FunctionSystem oriented = apply_signs(sys, signs);
            wronskian_verdict = check_mplus_wronskian(oriented, top, cfg.verify);
            Grid cert_grid = make_grid(sys.a(), sys.b(), 257);
            cert = positivity_certificate(oriented, spec.n(), cert_grid.nodes, cfg.verify);
        }

        int exit = kExitOk;
        if (refuted || (wronskian_verdict &&
                        wronskian_verdict->status == VerdictStatus::Refuted)) {
            exit = kExitRefuted;
        } else if (wronskian_verdict &&
                   wronskian_verdict->status == VerdictStatus::Inconclusive) {
            exit = kExitInconclusive;
        }

        CommandResult res;
        res.exit_code = exit;
        if (flags.json) {
            json j;
            j["command"] = "verify";
            j["levels"] = json::array();
            for (const Verdict& v : ladder) j["levels"].push_back(verdict_json(v));
            if (!refuted) j["signs"] = signs.signs;
            if (wronskian_verdict) j["wronskian"] = verdict_json(*wronskian_verdict);
            if (cert) {
                j["certificate"] = {{"coefficients", cert->coefficients},
                                    {"margin", cert->margin}};
            }
            j["exit"] = exit;
            res.output = j.dump(2) + "\n";
        } else {
            std::string out = "verify: " + std::to_string(sys.size()) + " functions on [" +
                              format_double(sys.a()) + ", " + format_double(sys.b()) + "]\n";
            for (const Verdict& v : ladder) {
                out += "level " + std::to_string(v.level) + ": " + verdict_text(v) + "\n";
            }
            if (!refuted) {
                out += "signs:";
                for (int s : signs.signs) out += s > 0 ? " +1" : " -1";
                out += "\n";
            }
            if (wronskian_verdict) {
                out += "wronskian: " + verdict_text(*wronskian_verdict) + "\n";
            }
            if (cert) {
                out += "certificate: margin " + format_double(cert->margin) + " coefficients [";
                out += join_nodes(cert->coefficients);
                out += "]\n";
            } else if (!refuted) {
                out += "certificate: none found on the sampling grid\n";
            }
            out += std::string("status: ") +
                   (exit == kExitOk ? "verified (sampling; not a proof)"
                    : exit == kExitRefuted ? "refuted" : "inconclusive") +
                   "\n";
            res.output = out;
        }
        return res;
    } catch (const SpecError& e) {
        return failure(kExitUsage, e.what(), flags.json, "verify");
    } catch (const Error& e) {
        return failure(kExitUsage, e.what(), flags.json, "verify");
    }
}

namespace {

json bound_json(const BoundReport& rep) {
    json j;
    j["sense"] = to_string(rep.sense);
    j["value"] = rep.value;
    j["atoms"] = measure_json(rep.measure);
    j["cone"] = cone_json(rep.cone);
    j["moment_residual"] = rep.moment_residual;
    j["newton_iterations"] = rep.newton_iterations;
    j["converged"] = rep.converged;
    j["singular_route"] = rep.singular_route;
    j["template"] = {{"points", rep.tmpl.total_points},
                     {"force_a", rep.tmpl.force_a},
                     {"force_b", rep.tmpl.force_b},
                     {"free_nodes", rep.tmpl.free_nodes}};
    j["dropped_forced_a"] = rep.dropped_forced_a;
    j["dropped_forced_b"] = rep.dropped_forced_b;
    j["hypothesis_ok"] = rep.hypothesis_ok;
    j["hypothesis"] = json::array();
    for (const Verdict& v : rep.hypothesis) j["hypothesis"].push_back(verdict_json(v));
    j["oracle"] = {{"grid", rep.oracle_grid},
                   {"value", rep.oracle_value},
                   {"gap", rep.oracle_gap},
                   {"atoms", measure_json(rep.oracle_measure)},
                   {"duals", rep.oracle_duals}};
    return j;
}

std::string bound_text(const BoundReport& rep) {
    std::string out = "bound sense=" + std::string(to_string(rep.sense)) + "\n";
    out += "cone: " + cone_text(rep.cone) + "\n";
    out += "value: " + format_double(rep.value) + "\n";
    out += "atoms (" + std::to_string(rep.measure.size()) + "):\n";
    for (const Atom& at : rep.measure.atoms) {
        out += "  node=" + format_double(at.node) + " weight=" + format_double(at.weight) + "\n";
    }
    out += "moment residual: " + format_double(rep.moment_residual) + "\n";
    out += "newton iterations: " + std::to_string(rep.newton_iterations) + "\n";
    out += std::string("converged: ") + (rep.converged ? "yes" : "no") + "\n";
    out += std::string("route: ") + (rep.singular_route ? "singular" : "template") + "\n";
    if (!rep.singular_route) {
        out += "template: " + template_text(rep.tmpl) + "\n";
        if (rep.dropped_forced_a) out += "note: forced endpoint a pruned at zero weight\n";
        if (rep.dropped_forced_b) out += "note: forced endpoint b pruned at zero weight\n";
    }
    out += "oracle: grid=" + std::to_string(rep.oracle_grid) +
           " value=" + format_double(rep.oracle_value) +
           " gap=" + format_double(rep.oracle_gap) +
           " support=" + std::to_string(rep.oracle_measure.size()) + "\n";
    for (const Verdict& v : rep.hypothesis) {
        out += "hypothesis level " + std::to_string(v.level) + ": " + verdict_text(v) + "\n";
    }
    if (!rep.hypothesis_ok) out += "note: hypothesis override in effect\n";
    return out;
}

}  // namespace

CommandResult cmd_bound(const ProblemSpec& spec, Sense sense, const GlobalFlags& flags) {
    try {
        BoundConfig cfg = make_config(spec, flags);
        FunctionSystem sys = spec.make_system();
        BoundReport rep = bound(sys, spec.moments, sense, cfg);

        CommandResult res;
        res.exit_code = rep.converged ? kExitOk : kExitNoConvergence;
        if (flags.json) {
            json j = bound_json(rep);
            j["command"] = "bound";
            j["exit"] = res.exit_code;
            res.output = j.dump(2) + "\n";
        } else {
            res.output = bound_text(rep);
        }
        return res;
    } catch (const HypothesisError& e) {
        return failure(kExitRefuted, e.what(), flags.json, "bound");
    } catch (const InfeasibleError& e) {
        return failure(kExitInfeasible, e.what(), flags.json, "bound");
    } catch (const SpecError& e) {
        return failure(kExitUsage, e.what(), flags.json, "bound");
    } catch (const Error& e) {
        return failure(kExitUsage, e.what(), flags.json, "bound");
    }
}

CommandResult cmd_oracle(const ProblemSpec& spec, Sense sense, const std::vector<int>& ladder,
                         const GlobalFlags& flags) {
    try {
        BoundConfig cfg = make_config(spec, flags);
        FunctionSystem sys = spec.make_system();
        const int max_support = static_cast<int>(spec.moments.size());

        CommandResult res;
        json rows = json::array();
        std::string text = "oracle sense=" + std::string(to_string(sense)) + "\n";
        for (int n_nodes : ladder) {
            Grid grid = make_grid(sys.a(), sys.b(), n_nodes);
            OracleSolution sol = solve_grid_lp(sys, spec.moments, grid, sense, cfg.simplex);
            if (sol.measure.size() > max_support) {
                throw Error("support bound violated at grid " + std::to_string(n_nodes));
            }
            if (flags.json) {
                json row;
                row["grid"] = sol.grid_size;
                row["sense"] = to_string(sol.sense);
                row["value"] = sol.value;
                row["atoms"] = measure_json(sol.measure);
                row["duals"] = sol.duals;
                row["phase1_residual"] = sol.phase1_residual;
                row["iterations"] = sol.iterations;
                rows.push_back(row);
            } else {
                text += "grid=" + std::to_string(sol.grid_size) +
                        " value=" + format_double(sol.value) +
                        " support=" + std::to_string(sol.measure.size()) +
                        " iterations=" + std::to_string(sol.iterations) +
                        " phase1=" + format_double(sol.phase1_residual) + "\n";
            }
        }
        if (flags.json) {
            json j;
            j["command"] = "oracle";
            j["rows"] = rows;
            j["exit"] = kExitOk;
            res.output = j.dump(2) + "\n";
        } else {
            text += "support bound <= " + std::to_string(max_support) + ": ok\n";
            res.output = text;
        }
        res.exit_code = kExitOk;
        return res;
    } catch (const InfeasibleError& e) {
        return failure(kExitInfeasible, e.what(), flags.json, "oracle");
    } catch (const SpecError& e) {
        return failure(kExitUsage, e.what(), flags.json, "oracle");
    } catch (const Error& e) {
        return failure(kExitUsage, e.what(), flags.json, "oracle");
    }
}

CommandResult cmd_compare(const ProblemSpec& spec, const std::string& alt_objective,
                          const GlobalFlags& flags) {
    try {
        BoundConfig cfg = make_config(spec, flags);
        FunctionSystem sys = spec.make_system();
        ExprPtr alt;
        try {
            alt = parse(alt_objective);
        } catch (const ParseError& e) {
            throw SpecError(std::string("--alt: ") + e.what());
        }
        double dist = objective_independence_check(sys, spec.moments, alt, cfg);

        CommandResult res;
        res.exit_code = dist <= 1e-6 ? kExitOk : kExitInconclusive;
        if (flags.json) {
            json j;
            j["command"] = "compare";
            j["objective"] = spec.objective_source;
            j["alt_objective"] = alt_objective;
            j["support_distance"] = dist;
            j["exit"] = res.exit_code;
            res.output = j.dump(2) + "\n";
        } else {
            res.output = "compare: " + spec.objective_source + " vs " + alt_objective + "\n" +
                         "support distance: " + format_double(dist) + "\n" +
                         (res.exit_code == kExitOk ? "supports agree\n"
                                                   : "supports differ beyond tolerance\n");
        }
        return res;
    } catch (const HypothesisError& e) {
        return failure(kExitRefuted, e.what(), flags.json, "compare");
    } catch (const InfeasibleError& e) {
        return failure(kExitInfeasible, e.what(), flags.json, "compare");
    } catch (const SpecError& e) {
        return failure(kExitUsage, e.what(), flags.json, "compare");
    } catch (const Error& e) {
        return failure(kExitUsage, e.what(), flags.json, "compare");
    }
}

}  // namespace tsys
