#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tsys/problem.hpp"

namespace tsys {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRefuted = 2;
inline constexpr int kExitInconclusive = 3;
inline constexpr int kExitInfeasible = 4;
inline constexpr int kExitNoConvergence = 5;

struct GlobalFlags {
    bool json = false;
    bool override_hypothesis = false;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
};

struct CommandResult {
    int exit_code = kExitOk;
    /// Printable report; JSON when GlobalFlags::json is set, line-oriented
    /// text otherwise. Byte-deterministic for a fixed spec and seed.
    std::string output;
};

/// T+/M+ verification ladder with sign normalization, the Wronskian
/// criterion, and a strict-positivity certificate search.
/// Exit: 0 all verified (up to signs), 2 refuted, 3 inconclusive.
CommandResult cmd_verify(const ProblemSpec& spec, const GlobalFlags& flags);

/// Full bound pipeline for one sense.
/// Exit: 0 ok, 2 refuted hypothesis, 4 infeasible, 5 no convergence.
CommandResult cmd_bound(const ProblemSpec& spec, Sense sense, const GlobalFlags& flags);

/// Grid-LP ladder report; checks the support-size bound at every rung.
CommandResult cmd_oracle(const ProblemSpec& spec, Sense sense, const std::vector<int>& ladder,
                         const GlobalFlags& flags);

/// Extremal-support independence of the objective: solves with the spec
/// objective and with alt_objective and compares supports.
/// Exit: 0 when the distance is at most 1e-6, 3 otherwise, 2 on a refuted
/// hypothesis without override.
CommandResult cmd_compare(const ProblemSpec& spec, const std::string& alt_objective,
                          const GlobalFlags& flags);

const char* to_string(Sense sense);

}  // namespace tsys
