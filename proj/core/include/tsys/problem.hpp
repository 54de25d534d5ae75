#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsys/solver.hpp"

namespace tsys {

struct ProblemOptions {
    int grid = 4097;
    std::optional<std::uint64_t> seed;
    /// Overrides the sampling sign tolerance factor.
    std::optional<double> tol;
    /// Optional measure-transform rescaling; every function is divided by
    /// this strictly positive expression before solving.
    ExprPtr rescale_h;
    std::string rescale_source;
};

/// One moment-problem instance as loaded from a spec document.
struct ProblemSpec {
    double a = 0.0;
    double b = 1.0;
    std::vector<std::string> function_sources;  // constrained g_0..g_n
    std::vector<ExprPtr> functions;
    std::string objective_source;
    ExprPtr objective;
    MomentVector moments;
    ProblemOptions options;

    int n() const { return static_cast<int>(moments.size()) - 1; }

    /// Builds the function system (constrained functions plus objective),
    /// applying the rescale option when present.
    FunctionSystem make_system() const;
};

/// Parses the JSON spec document:
///   { "interval": [a, b], "functions": ["1", "x"], "objective": "x^2",
///     "moments": [1, 0.5], "options": { "grid": 4097, "seed": 7,
///     "tol": 1e-9, "rescale": "exp(x)" } }
/// Throws SpecError with a location on malformed input or an arity mismatch
/// between functions and moments.
ProblemSpec parse_spec(const std::string& text);

/// Reads and parses the file at path.
ProblemSpec load_spec(const std::string& path);

}  // namespace tsys
