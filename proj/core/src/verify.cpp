#include "tsys/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "tsys/linalg.hpp"
#include "tsys/simplex.hpp"

namespace tsys {

const char* to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::VerifiedPlus: return "verified+";
        case VerdictStatus::VerifiedMinus: return "verified-";
        case VerdictStatus::Refuted: return "refuted";
        case VerdictStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

const char* to_string(VerifyMethod m) {
    return m == VerifyMethod::DeterminantSampling ? "determinant-sampling" : "wronskian";
}

namespace {

constexpr double kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                              41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

double frac(double v) { return v - std::floor(v); }

// C(n, k) capped so the caller can compare against a sampling budget.
long binomial_capped(int n, int k, long cap) {
    if (k < 0 || k > n) return 0;
    double v = 1.0;
    for (int i = 0; i < k; ++i) {
        v *= static_cast<double>(n - i) / static_cast<double>(i + 1);
        if (v > 2.0 * static_cast<double>(cap)) return cap + 1;
    }
    return static_cast<long>(v + 0.5);
}

void append_coarse_combinations(double a, double b, int k, const VerifyOptions& opt,
                                std::vector<std::vector<double>>& out) {
    const int p = opt.coarse_points;
    const int kk = k + 1;
    if (kk > p) return;
    if (binomial_capped(p, kk, opt.coarse_cap) > opt.coarse_cap) return;

    std::vector<double> grid(p);
    for (int i = 0; i < p; ++i) {
        grid[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(p - 1);
    }
    grid.front() = a;
    grid.back() = b;

    std::vector<int> idx(kk);
    for (int i = 0; i < kk; ++i) idx[i] = i;
    for (;;) {
        std::vector<double> tuple(kk);
        for (int i = 0; i < kk; ++i) tuple[i] = grid[idx[i]];
        out.push_back(std::move(tuple));
        int pos = kk - 1;
        while (pos >= 0 && idx[pos] == p - kk + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < kk; ++i) idx[i] = idx[i - 1] + 1;
    }
}

void append_stratified(double a, double b, int k, const VerifyOptions& opt,
                       std::vector<std::vector<double>>& out) {
    const int kk = k + 1;
    for (int t = 0; t < opt.quasi_tuples; ++t) {
        std::vector<double> tuple(kk);
        for (int i = 0; i < kk; ++i) {
            double alpha = frac(std::sqrt(kPrimes[i % std::size(kPrimes)]));
            double u = frac(static_cast<double>(t + 1) * alpha);
            // keep neighbours separated; a genuine T-system determinant on a
            // near-degenerate tuple would fall inside the vanishing tolerance
            u = std::clamp(u, 1e-3, 1.0 - 1e-3);
            tuple[i] = a + (b - a) * (static_cast<double>(i) + u) / static_cast<double>(kk);
        }
        out.push_back(std::move(tuple));
    }
}

void append_random(double a, double b, int k, const VerifyOptions& opt,
                   std::vector<std::vector<double>>& out) {
    const int kk = k + 1;
    std::mt19937_64 rng(opt.seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(k + 1));
    std::uniform_real_distribution<double> dist(a, b);
    const double min_gap = 1e-5 * (b - a);
    for (int t = 0; t < opt.random_tuples; ++t) {
        std::vector<double> tuple(kk);
        for (int attempt = 0; attempt < 100; ++attempt) {
            for (int i = 0; i < kk; ++i) tuple[i] = dist(rng);
            std::sort(tuple.begin(), tuple.end());
            bool ok = true;
            for (int i = 0; i + 1 < kk; ++i) {
                if (tuple[i + 1] - tuple[i] < min_gap) {
                    ok = false;
                    break;
                }
            }
            if (ok) break;
        }
        out.push_back(std::move(tuple));
    }
}

DetResult det_with_scale(const FunctionSystem& sys, int k, std::span<const double> nodes) {
    Matrix m(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
        for (int j = 0; j <= k; ++j) m(i, j) = sys.value(i, nodes[j]);
    }
    return determinant(std::move(m));
}

}  // namespace

SimplexSample default_sample(double a, double b, int k, const VerifyOptions& opt) {
    if (k < 0) throw std::invalid_argument("default_sample: negative level");
    SimplexSample sample;
    sample.seed = opt.seed;
    sample.strategy = "coarse-grid+stratified+random";
    append_coarse_combinations(a, b, k, opt, sample.tuples);
    append_stratified(a, b, k, opt, sample.tuples);
    append_random(a, b, k, opt, sample.tuples);
    return sample;
}

double system_determinant(const FunctionSystem& sys, int k, std::span<const double> nodes) {
    if (k < 0 || k + 1 > sys.size()) {
        throw std::invalid_argument("system_determinant: level out of range");
    }
    if (static_cast<int>(nodes.size()) != k + 1) {
        throw std::invalid_argument("system_determinant: need k+1 nodes");
    }
    for (int i = 0; i <= k; ++i) {
        if (nodes[i] < sys.a() || nodes[i] > sys.b()) {
            throw std::invalid_argument("system_determinant: node outside [a, b]");
        }
        if (i > 0 && !(nodes[i - 1] < nodes[i])) {
            throw std::invalid_argument("system_determinant: nodes not strictly increasing");
        }
    }
    return det_with_scale(sys, k, nodes).value;
}

double wronskian(const FunctionSystem& sys, int k, double x) {
    if (k < 0 || k + 1 > sys.size()) {
        throw std::invalid_argument("wronskian: level out of range");
    }
    if (!(x > sys.a() && x < sys.b())) {
        throw std::invalid_argument("wronskian: x must lie in the open interval (a, b)");
    }
    Matrix m(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
        for (int j = 0; j <= k; ++j) m(i, j) = sys.derivative_value(i, j, x);
    }
    return determinant(std::move(m)).value;
}

Verdict check_tplus(const FunctionSystem& sys, int k, const SimplexSample& sample,
                    const VerifyOptions& opt) {
    if (sample.tuples.empty()) throw std::invalid_argument("check_tplus: empty sample");
    if (k < 0 || k + 1 > sys.size()) {
        throw std::invalid_argument("check_tplus: level out of range");
    }

    Verdict v;
    v.method = VerifyMethod::DeterminantSampling;
    v.level = k;
    v.sample_size = sample.tuples.size();
    v.seed = sample.seed;

    int expected_sign = 0;
    for (const auto& tuple : sample.tuples) {
        DetResult det = det_with_scale(sys, k, tuple);
        // Generalized Vandermonde determinants carry the divided-difference
        // factor prod (x_j - x_i); fold it into the vanishing scale so that a
        // clustered tuple of a healthy system is not mistaken for a zero.
        double gap_factor = 1.0;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            for (std::size_t j = i + 1; j < tuple.size(); ++j) {
                gap_factor *= (tuple[j] - tuple[i]) / (sys.b() - sys.a());
            }
        }
        if (std::abs(det.value) <= opt.tol_factor * det.scale * gap_factor) {
            v.status = VerdictStatus::Refuted;
            v.witness = Witness{tuple, det.value};
            return v;
        }
        int sign = det.value > 0.0 ? 1 : -1;
        if (expected_sign == 0) {
            expected_sign = sign;
        } else if (sign != expected_sign) {
            v.status = VerdictStatus::Refuted;
            v.witness = Witness{tuple, det.value};
            return v;
        }
    }
    v.status = expected_sign > 0 ? VerdictStatus::VerifiedPlus : VerdictStatus::VerifiedMinus;
    return v;
}

Verdict check_tplus(const FunctionSystem& sys, int k, const VerifyOptions& opt) {
    return check_tplus(sys, k, default_sample(sys.a(), sys.b(), k, opt), opt);
}

Verdict check_mplus_wronskian(const FunctionSystem& sys, int n,
                              std::span<const double> interior_grid,
                              const VerifyOptions& opt) {
    if (n < 0 || n + 1 > sys.size()) {
        throw std::invalid_argument("check_mplus_wronskian: level out of range");
    }
    if (interior_grid.empty()) {
        throw std::invalid_argument("check_mplus_wronskian: empty grid");
    }

    Verdict v;
    v.method = VerifyMethod::Wronskian;
    v.level = n;
    v.sample_size = interior_grid.size();
    v.seed = opt.seed;

    std::optional<Witness> vanishing;
    int vanishing_level = 0;

    // level 0 on the closed interval: a nonpositive g_0 at an endpoint breaks
    // only the sufficient direction, a negative interior g_0 refutes outright
    for (double x : {sys.a(), sys.b()}) {
        double g0 = sys.value(0, x);
        if (g0 <= 0.0 && !vanishing) {
            vanishing = Witness{{x}, g0};
            vanishing_level = 0;
        }
    }

    for (int k = 0; k <= n; ++k) {
        for (double x : interior_grid) {
            if (!(x > sys.a() && x < sys.b())) {
                throw std::invalid_argument("check_mplus_wronskian: grid point not interior");
            }
            Matrix m(k + 1, k + 1);
            for (int i = 0; i <= k; ++i) {
                for (int j = 0; j <= k; ++j) m(i, j) = sys.derivative_value(i, j, x);
            }
            DetResult det = determinant(std::move(m));
            double tol = opt.tol_factor * det.scale;
            if (det.value < -tol) {
                v.status = VerdictStatus::Refuted;
                v.level = k;
                v.witness = Witness{{x}, det.value};
                return v;
            }
            if (std::abs(det.value) <= tol && !vanishing) {
                vanishing = Witness{{x}, det.value};
                vanishing_level = k;
            }
        }
    }

    if (vanishing) {
        v.status = VerdictStatus::Inconclusive;
        v.level = vanishing_level;
        v.witness = vanishing;
        return v;
    }
    v.status = VerdictStatus::VerifiedPlus;
    return v;
}

Verdict check_mplus_wronskian(const FunctionSystem& sys, int n, const VerifyOptions& opt) {
    const double eps = opt.endpoint_eps_factor * (sys.b() - sys.a());
    const double lo = sys.a() + eps;
    const double hi = sys.b() - eps;
    std::vector<double> grid(opt.wronskian_points);
    for (int i = 0; i < opt.wronskian_points; ++i) {
        grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                           static_cast<double>(opt.wronskian_points - 1);
    }
    return check_mplus_wronskian(sys, n, grid, opt);
}

SignVector normalize_signs(const FunctionSystem& sys, int n, const VerifyOptions& opt) {
    if (n < 0 || n + 1 > sys.size()) {
        throw std::invalid_argument("normalize_signs: level out of range");
    }
    // the determinant of the signed segment is (prod of signs) times the
    // original one, so the sampled sign sigma_k of each original segment
    // determines s_k = sigma_k * sigma_{k-1} without rebuilding the system
    SignVector s;
    s.signs.reserve(static_cast<std::size_t>(n) + 1);
    int prev_sigma = 1;
    for (int k = 0; k <= n; ++k) {
        Verdict v = check_tplus(sys, k, opt);
        if (v.status != VerdictStatus::VerifiedPlus && v.status != VerdictStatus::VerifiedMinus) {
            throw NotMSystemError("normalize_signs: level " + std::to_string(k) +
                                      " is not sign-definite on the sample",
                                  k);
        }
        int sigma = v.status == VerdictStatus::VerifiedPlus ? 1 : -1;
        s.signs.push_back(sigma * prev_sigma);
        prev_sigma = sigma;
    }
    return s;
}

FunctionSystem apply_signs(const FunctionSystem& sys, const SignVector& s) {
    std::vector<ExprPtr> funcs;
    funcs.reserve(sys.size());
    for (int i = 0; i < sys.size(); ++i) {
        if (i < static_cast<int>(s.signs.size()) && s.signs[i] == -1) {
            funcs.push_back(ast::neg(sys.function(i)));
        } else {
            funcs.push_back(sys.function(i));
        }
    }
    return sys.with_functions(std::move(funcs));
}

std::optional<PositivityCertificate> positivity_certificate(const FunctionSystem& sys, int n,
                                                            std::span<const double> grid,
                                                            const VerifyOptions& opt) {
    if (n < 0 || n + 1 > sys.size()) {
        throw std::invalid_argument("positivity_certificate: level out of range");
    }
    if (grid.size() < 2 || std::abs(grid.front() - sys.a()) > 1e-12 * (sys.b() - sys.a()) ||
        std::abs(grid.back() - sys.b()) > 1e-12 * (sys.b() - sys.a())) {
        throw std::invalid_argument("positivity_certificate: grid must cover [a, b]");
    }

    // LP dual of  max t : sum lambda_i g_i(x_j) >= t, |lambda_i| <= 1.
    // Variables: w_j (one per grid point), alpha_i, beta_i; constraints:
    //   sum_j w_j g_i(x_j) - alpha_i + beta_i = 0,   sum_j w_j = 1;
    // minimize sum (alpha_i + beta_i). The certificate is read off the duals.
    const int npts = static_cast<int>(grid.size());
    const int dim = n + 1;
    const int rows = dim + 1;

    DenseLp lp;
    lp.rows = rows;
    lp.cols = npts + 2 * dim;
    lp.sense = Sense::Min;
    lp.columns.assign(static_cast<std::size_t>(lp.rows) * lp.cols, 0.0);
    lp.objective.assign(lp.cols, 0.0);
    lp.rhs.assign(rows, 0.0);
    lp.rhs.back() = 1.0;

    double fn_scale = 0.0;
    for (int j = 0; j < npts; ++j) {
        auto* col = lp.columns.data() + static_cast<std::size_t>(j) * rows;
        for (int i = 0; i < dim; ++i) {
            col[i] = sys.value(i, grid[j]);
            fn_scale = std::max(fn_scale, std::abs(col[i]));
        }
        col[dim] = 1.0;
    }
    for (int i = 0; i < dim; ++i) {
        lp.columns[static_cast<std::size_t>(npts + i) * rows + i] = -1.0;  // alpha_i
        lp.objective[npts + i] = 1.0;
        lp.columns[static_cast<std::size_t>(npts + dim + i) * rows + i] = 1.0;  // beta_i
        lp.objective[npts + dim + i] = 1.0;
    }

    LpResult res = solve_lp(lp);
    if (res.status != LpStatus::Optimal) return std::nullopt;

    PositivityCertificate cert;
    cert.coefficients.resize(dim);
    for (int i = 0; i < dim; ++i) {
        cert.coefficients[i] = std::clamp(-res.duals[i], -1.0, 1.0);
    }

    double margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < npts; ++j) {
        double v = 0.0;
        for (int i = 0; i < dim; ++i) v += cert.coefficients[i] * sys.value(i, grid[j]);
        margin = std::min(margin, v);
    }
    cert.margin = margin;

    if (!(margin > opt.certificate_tol * (1.0 + fn_scale))) return std::nullopt;
    return cert;
}

}  // namespace tsys
