#include "tsys/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tsys/linalg.hpp"

namespace tsys {

namespace {

// LU factorization with partial pivoting, plus transpose solves for duals.
class Lu {
public:
    explicit Lu(Matrix a) : n_(a.rows()), a_(std::move(a)), piv_(n_) {
        for (int k = 0; k < n_; ++k) {
            int p = k;
            double best = std::abs(a_(k, k));
            for (int i = k + 1; i < n_; ++i) {
                if (std::abs(a_(i, k)) > best) {
                    best = std::abs(a_(i, k));
                    p = i;
                }
            }
            piv_[k] = p;
            if (best == 0.0) throw SingularMatrixError("simplex: singular basis matrix");
            if (p != k) {
                for (int j = 0; j < n_; ++j) std::swap(a_(k, j), a_(p, j));
            }
            for (int i = k + 1; i < n_; ++i) {
                a_(i, k) /= a_(k, k);
                double f = a_(i, k);
                if (f == 0.0) continue;
                for (int j = k + 1; j < n_; ++j) a_(i, j) -= f * a_(k, j);
            }
        }
    }

    // x = B^-1 b
    std::vector<double> solve(std::vector<double> b) const {
        for (int k = 0; k < n_; ++k) std::swap(b[k], b[piv_[k]]);
        for (int i = 1; i < n_; ++i) {
            double s = b[i];
            for (int j = 0; j < i; ++j) s -= a_(i, j) * b[j];
            b[i] = s;
        }
        for (int i = n_ - 1; i >= 0; --i) {
            double s = b[i];
            for (int j = i + 1; j < n_; ++j) s -= a_(i, j) * b[j];
            b[i] = s / a_(i, i);
        }
        return b;
    }

    // y = B^-T c
    std::vector<double> solve_transpose(std::vector<double> c) const {
        for (int i = 0; i < n_; ++i) {
            double s = c[i];
            for (int j = 0; j < i; ++j) s -= a_(j, i) * c[j];
            c[i] = s / a_(i, i);
        }
        for (int i = n_ - 1; i >= 0; --i) {
            double s = c[i];
            for (int j = i + 1; j < n_; ++j) s -= a_(j, i) * c[j];
            c[i] = s;
        }
        for (int k = n_ - 1; k >= 0; --k) std::swap(c[k], c[piv_[k]]);
        return c;
    }

private:
    int n_;
    Matrix a_;
    std::vector<int> piv_;
};

class Solver {
public:
    Solver(const DenseLp& lp, const SimplexOptions& opt)
        : lp_(lp), opt_(opt), m_(lp.rows), n_(lp.cols),
          flip_(m_, 1.0), b_(m_), basis_(m_), in_basis_(n_ + m_, 0) {
        for (int i = 0; i < m_; ++i) {
            double v = lp_.rhs[i];
            if (v < 0.0) {
                flip_[i] = -1.0;
                v = -v;
            }
            b_[i] = v;
        }
        double nrm = 0.0;
        for (double v : lp_.rhs) nrm += v * v;
        feas_tol_ = opt_.feas_tol_scale * std::sqrt(nrm);
        for (int r = 0; r < m_; ++r) {
            basis_[r] = n_ + r;
            in_basis_[n_ + r] = 1;
        }
    }

    LpResult run() {
        LpResult res;

        // Phase 1: minimize the sum of the artificial variables.
        Step outcome = iterate(/*phase1=*/true);
        res.phase1_objective = last_objective_;
        res.iterations = iterations_;
        if (outcome == Step::IterationLimit) {
            res.status = LpStatus::IterationLimit;
            return res;
        }
        if (last_objective_ > feas_tol_) {
            res.status = LpStatus::Infeasible;
            return res;
        }
        if (opt_.phase1_only) {
            res.status = LpStatus::Optimal;
            finalize(res);
            return res;
        }

        pivot_out_artificials();

        outcome = iterate(/*phase1=*/false);
        res.iterations = iterations_;
        switch (outcome) {
            case Step::Optimal: res.status = LpStatus::Optimal; break;
            case Step::Unbounded: res.status = LpStatus::Unbounded; break;
            case Step::IterationLimit: res.status = LpStatus::IterationLimit; break;
        }
        if (res.status == LpStatus::Optimal) finalize(res);
        return res;
    }

private:
    enum class Step { Optimal, Unbounded, IterationLimit };

    const DenseLp& lp_;
    const SimplexOptions& opt_;
    int m_;
    int n_;
    std::vector<double> flip_;
    std::vector<double> b_;
    std::vector<int> basis_;
    std::vector<char> in_basis_;
    double feas_tol_ = 0.0;
    long iterations_ = 0;
    int cursor_ = 0;
    double last_objective_ = 0.0;

    bool artificial(int j) const { return j >= n_; }

    // column j in row-flipped orientation
    double col_entry(int i, int j) const {
        if (artificial(j)) return j - n_ == i ? 1.0 : 0.0;
        return flip_[i] * lp_.entry(i, j);
    }

    std::vector<double> column(int j) const {
        std::vector<double> a(m_);
        for (int i = 0; i < m_; ++i) a[i] = col_entry(i, j);
        return a;
    }

    // phase-1 cost: 1 on artificials; phase-2 cost: min orientation of the objective
    double cost(int j, bool phase1) const {
        if (phase1) return artificial(j) ? 1.0 : 0.0;
        if (artificial(j)) return 0.0;
        return lp_.sense == Sense::Max ? -lp_.objective[j] : lp_.objective[j];
    }

    Matrix basis_matrix() const {
        Matrix bm(m_, m_);
        for (int r = 0; r < m_; ++r) {
            for (int i = 0; i < m_; ++i) bm(i, r) = col_entry(i, basis_[r]);
        }
        return bm;
    }

    Step iterate(bool phase1) {
        const long total_cols = n_ + m_;
        const long bland_after = opt_.bland_after_factor * total_cols;
        const long hard_cap = bland_after + 200L * total_cols + 20000L;

        for (;;) {
            Lu lu(basis_matrix());
            std::vector<double> xb = lu.solve(b_);

            std::vector<double> cb(m_);
            for (int r = 0; r < m_; ++r) cb[r] = cost(basis_[r], phase1);
            last_objective_ = 0.0;
            for (int r = 0; r < m_; ++r) last_objective_ += cb[r] * xb[r];

            // phase-1 objective is bounded below by zero, so once it is within
            // tolerance the point is feasible and we can stop
            if (phase1 && last_objective_ <= feas_tol_) return Step::Optimal;

            if (iterations_ >= hard_cap) return Step::IterationLimit;
            const bool bland = iterations_ >= bland_after;

            std::vector<double> y = lu.solve_transpose(cb);

            int q = price(y, phase1, bland);
            if (q < 0) return Step::Optimal;

            std::vector<double> d = lu.solve(column(q));
            int leave = ratio_test(xb, d, lu, bland);
            if (leave < 0) {
                // no blocking row: in phase 1 the objective is bounded, so
                // this can only happen in phase 2
                return Step::Unbounded;
            }

            in_basis_[basis_[leave]] = 0;
            basis_[leave] = q;
            in_basis_[q] = 1;
            ++iterations_;
        }
    }

    // Entering column with negative reduced cost, or -1 when none remains.
    // Partial pricing: sweep blocks starting at a rotating cursor and take the
    // most negative candidate in the first block that has one.
    int price(const std::vector<double>& y, bool phase1, bool bland) {
        const int total = n_ + m_;
        auto reduced = [&](int j) {
            double dot = 0.0;
            for (int i = 0; i < m_; ++i) dot += y[i] * col_entry(i, j);
            return cost(j, phase1) - dot;
        };
        auto eligible = [&](int j, double r) {
            double tol = 1e-9 * (1.0 + std::abs(cost(j, phase1)));
            return r < -tol;
        };
        auto skip = [&](int j) {
            if (in_basis_[j]) return true;
            // artificials never re-enter in phase 2
            return !phase1 && artificial(j);
        };

        if (bland) {
            for (int j = 0; j < total; ++j) {
                if (skip(j)) continue;
                double r = reduced(j);
                if (eligible(j, r)) return j;
            }
            return -1;
        }

        const int block = std::max(64, total / 16);
        int scanned = 0;
        int start = cursor_ % total;
        while (scanned < total) {
            int best = -1;
            double best_r = 0.0;
            int count = std::min(block, total - scanned);
            for (int t = 0; t < count; ++t) {
                int j = (start + t) % total;
                if (skip(j)) continue;
                double r = reduced(j);
                if (eligible(j, r) && r < best_r) {
                    best_r = r;
                    best = j;
                }
            }
            scanned += count;
            start = (start + count) % total;
            if (best >= 0) {
                cursor_ = start;
                return best;
            }
        }
        return -1;
    }

    // Leaving row by the minimum-ratio rule; ties broken lexicographically on
    // the rows of B^-1 scaled by the pivot entries (anti-cycling), with the
    // smallest basis index as the final fallback. Returns -1 when unbounded.
    int ratio_test(const std::vector<double>& xb, const std::vector<double>& d,
                   const Lu& lu, bool bland) const {
        double dmax = 0.0;
        for (double v : d) dmax = std::max(dmax, std::abs(v));
        const double piv_tol = 1e-9 * std::max(1.0, dmax);

        double theta = std::numeric_limits<double>::infinity();
        std::vector<int> ties;
        for (int i = 0; i < m_; ++i) {
            if (d[i] <= piv_tol) continue;
            double ratio = std::max(xb[i], 0.0) / d[i];
            if (ratio < theta * (1.0 - 1e-12) - 1e-30) {
                theta = ratio;
                ties.assign(1, i);
            } else if (ratio <= theta * (1.0 + 1e-12) + 1e-30) {
                theta = std::min(theta, ratio);
                ties.push_back(i);
            }
        }
        if (ties.empty()) return -1;
        if (ties.size() == 1) return ties[0];

        if (bland) {
            int best = ties[0];
            for (int i : ties) {
                if (basis_[i] < basis_[best]) best = i;
            }
            return best;
        }

        // lexicographic comparison over columns of B^-1
        std::vector<int> alive = ties;
        std::vector<double> unit(m_, 0.0);
        for (int t = 0; t < m_ && alive.size() > 1; ++t) {
            unit.assign(m_, 0.0);
            unit[t] = 1.0;
            std::vector<double> invcol = lu.solve(unit);  // column t of B^-1
            double best = std::numeric_limits<double>::infinity();
            for (int i : alive) best = std::min(best, invcol[i] / d[i]);
            std::vector<int> next;
            for (int i : alive) {
                double v = invcol[i] / d[i];
                if (v <= best + 1e-12 * (1.0 + std::abs(best))) next.push_back(i);
            }
            alive.swap(next);
        }
        int best = alive[0];
        for (int i : alive) {
            if (basis_[i] < basis_[best]) best = i;
        }
        return best;
    }

    // After phase 1, swap zero-level artificials for structural columns where
    // a nonzero pivot exists; rows with no such column are redundant and keep
    // their artificial at level zero.
    void pivot_out_artificials() {
        for (int r = 0; r < m_; ++r) {
            if (!artificial(basis_[r])) continue;
            Lu lu(basis_matrix());
            std::vector<double> unit(m_, 0.0);
            unit[r] = 1.0;
            std::vector<double> row = lu.solve_transpose(unit);  // row r of B^-1
            int pick = -1;
            double best = 1e-7;
            for (int j = 0; j < n_; ++j) {
                if (in_basis_[j]) continue;
                double v = 0.0;
                for (int i = 0; i < m_; ++i) v += row[i] * col_entry(i, j);
                if (std::abs(v) > best) {
                    best = std::abs(v);
                    pick = j;
                }
            }
            if (pick >= 0) {
                in_basis_[basis_[r]] = 0;
                basis_[r] = pick;
                in_basis_[pick] = 1;
            }
        }
    }

    void finalize(LpResult& res) const {
        Lu lu(basis_matrix());
        std::vector<double> xb = lu.solve(b_);

        res.basic.clear();
        res.objective = 0.0;
        double artificial_mass = 0.0;
        for (int r = 0; r < m_; ++r) {
            int j = basis_[r];
            if (artificial(j)) {
                artificial_mass += std::abs(xb[r]);
                continue;
            }
            res.basic.emplace_back(j, xb[r]);
            res.objective += lp_.objective[j] * xb[r];
        }
        std::sort(res.basic.begin(), res.basic.end());
        if (!opt_.phase1_only) res.phase1_objective = artificial_mass;

        // duals in the original orientation: solve B^T y = f_B with the true
        // objective, then undo the row flips
        std::vector<double> fb(m_);
        for (int r = 0; r < m_; ++r) {
            fb[r] = artificial(basis_[r]) ? 0.0 : lp_.objective[basis_[r]];
        }
        std::vector<double> y = lu.solve_transpose(fb);
        res.duals.resize(m_);
        for (int i = 0; i < m_; ++i) res.duals[i] = flip_[i] * y[i];
    }
};

}  // namespace

LpResult solve_lp(const DenseLp& lp, const SimplexOptions& opt) {
    if (lp.rows <= 0 || lp.cols <= 0) throw std::invalid_argument("solve_lp: empty program");
    if (static_cast<int>(lp.objective.size()) != lp.cols ||
        static_cast<int>(lp.rhs.size()) != lp.rows ||
        lp.columns.size() != static_cast<std::size_t>(lp.rows) * lp.cols) {
        throw std::invalid_argument("solve_lp: inconsistent dimensions");
    }
    Solver solver(lp, opt);
    return solver.run();
}

}  // namespace tsys
