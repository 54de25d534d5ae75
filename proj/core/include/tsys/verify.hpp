#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsys/system.hpp"

namespace tsys {

struct VerifyOptions {
    /// Stratified quasi-uniform tuples per level.
    int quasi_tuples = 512;
    /// Seeded pseudo-random tuples per level.
    int random_tuples = 512;
    /// All increasing tuples of a coarse uniform grid are added while the
    /// combination count stays within coarse_cap.
    int coarse_points = 12;
    int coarse_cap = 4096;
    std::uint64_t seed = 0;
    /// |det| <= tol_factor * (product of row norms) counts as vanishing.
    double tol_factor = 1e-9;
    /// Interior evaluation points for the Wronskian criterion.
    int wronskian_points = 1001;
    /// Wronskians are checked on [a + eps, b - eps], eps = factor * (b - a).
    double endpoint_eps_factor = 1e-6;
    /// Minimum accepted certificate margin, relative to the function scale.
    double certificate_tol = 1e-9;
};

enum class VerdictStatus { VerifiedPlus, VerifiedMinus, Refuted, Inconclusive };
enum class VerifyMethod { DeterminantSampling, Wronskian };

const char* to_string(VerdictStatus s);
const char* to_string(VerifyMethod m);

struct Witness {
    std::vector<double> nodes;  // offending tuple; a single point for Wronskians
    double determinant = 0.0;
};

/// Outcome of a sampling check. VerifiedPlus/Minus mean "consistent with the
/// claim on this sample", never a proof; Refuted carries a concrete witness.
struct Verdict {
    VerdictStatus status = VerdictStatus::Inconclusive;
    VerifyMethod method = VerifyMethod::DeterminantSampling;
    int level = 0;  // k of the checked initial segment g_0..g_k
    std::optional<Witness> witness;
    std::size_t sample_size = 0;
    std::uint64_t seed = 0;
};

/// Batch of strictly increasing node tuples inside [a, b].
struct SimplexSample {
    std::vector<std::vector<double>> tuples;
    std::string strategy;
    std::uint64_t seed = 0;
};

/// Default sample at level k: every increasing tuple of a coarse uniform grid
/// (within the cap), stratified quasi-uniform tuples, and seeded random
/// tuples. Deterministic for a fixed seed.
SimplexSample default_sample(double a, double b, int k, const VerifyOptions& opt = {});

/// det(g_i(x_j)), i,j = 0..k, by partially pivoted elimination.
/// Nodes must be strictly increasing inside [a, b].
double system_determinant(const FunctionSystem& sys, int k, std::span<const double> nodes);

/// W_0^k(x) = det(g_i^(j)(x)), i,j = 0..k; W_0^0 = g_0. Requires x in (a, b).
double wronskian(const FunctionSystem& sys, int k, double x);

/// Samples determinants of g_0..g_k over the tuples. All positive beyond the
/// vanishing tolerance: VerifiedPlus. All negative: VerifiedMinus (flipping
/// the sign of g_k would orient the system positively). A vanishing value or
/// a sign change refutes with a witness.
Verdict check_tplus(const FunctionSystem& sys, int k, const SimplexSample& sample,
                    const VerifyOptions& opt = {});
Verdict check_tplus(const FunctionSystem& sys, int k, const VerifyOptions& opt = {});

/// Differential criterion for the normalized Markov property of g_0..g_n:
/// g_0 positive on the closed interval and W_0^k positive on the open one.
/// A negative interior Wronskian refutes; a vanishing one is inconclusive
/// (positivity is only sufficient, nonnegativity only necessary).
Verdict check_mplus_wronskian(const FunctionSystem& sys, int n,
                              std::span<const double> interior_grid,
                              const VerifyOptions& opt = {});
Verdict check_mplus_wronskian(const FunctionSystem& sys, int n,
                              const VerifyOptions& opt = {});

/// Signs with entries +1/-1.
struct SignVector {
    std::vector<int> signs;
};

/// Signs s such that (s_0 g_0, ..., s_n g_n) samples as an M+ system,
/// determined inductively from the sampled determinant signs of the initial
/// segments. Throws NotMSystemError when a segment is refuted.
SignVector normalize_signs(const FunctionSystem& sys, int n, const VerifyOptions& opt = {});

/// System with the signs applied (only the first signs.size() functions are
/// touched; any following functions are kept as they are).
FunctionSystem apply_signs(const FunctionSystem& sys, const SignVector& s);

/// Coefficients with |lambda_i| <= 1 whose combination of g_0..g_n stays
/// above `margin` > 0 at every grid point.
struct PositivityCertificate {
    std::vector<double> coefficients;
    double margin = 0.0;
};

/// Searches for a strict-positivity certificate by maximizing the minimum of
/// sum lambda_i g_i over the grid (an LP solved through the simplex core).
/// Returns nullopt when the best margin is not positive; that outcome does
/// not refute the existence of a certificate off the grid.
std::optional<PositivityCertificate> positivity_certificate(const FunctionSystem& sys, int n,
                                                            std::span<const double> grid,
                                                            const VerifyOptions& opt = {});

}  // namespace tsys
