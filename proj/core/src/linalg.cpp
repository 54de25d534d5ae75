#include "tsys/linalg.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace tsys {

DetResult determinant(Matrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
    const int n = m.rows();

    double scale = 1.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += m(i, j) * m(i, j);
        scale *= std::sqrt(s);
    }

    double det = 1.0;
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(m(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(m(i, k)) > best) {
                best = std::abs(m(i, k));
                pivot = i;
            }
        }
        if (best == 0.0) return {0.0, scale};
        if (pivot != k) {
            for (int j = k; j < n; ++j) std::swap(m(k, j), m(pivot, j));
            det = -det;
        }
        det *= m(k, k);
        for (int i = k + 1; i < n; ++i) {
            double f = m(i, k) / m(k, k);
            for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return {det, scale};
}

std::vector<double> solve_linear(Matrix a, std::vector<double> rhs) {
    const int n = a.rows();
    if (a.cols() != n || static_cast<int>(rhs.size()) != n) {
        throw std::invalid_argument("solve_linear: dimension mismatch");
    }
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                pivot = i;
            }
        }
        if (best == 0.0) throw SingularMatrixError("solve_linear: singular matrix");
        if (pivot != k) {
            for (int j = k; j < n; ++j) std::swap(a(k, j), a(pivot, j));
            std::swap(rhs[k], rhs[pivot]);
        }
        for (int i = k + 1; i < n; ++i) {
            double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            rhs[i] -= f * rhs[k];
        }
    }
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

std::vector<double> solve_least_squares(Matrix a, std::vector<double> rhs) {
    const int m = a.rows();
    const int n = a.cols();
    if (m < n || static_cast<int>(rhs.size()) != m) {
        throw std::invalid_argument("solve_least_squares: dimension mismatch");
    }

    double norm_a = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) norm_a = std::max(norm_a, std::abs(a(i, j)));

    // Householder QR, applying reflectors to rhs as they are formed.
    for (int k = 0; k < n; ++k) {
        double alpha = 0.0;
        for (int i = k; i < m; ++i) alpha += a(i, k) * a(i, k);
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) throw SingularMatrixError("solve_least_squares: rank deficient");
        if (a(k, k) > 0.0) alpha = -alpha;

        std::vector<double> v(m - k);
        v[0] = a(k, k) - alpha;
        for (int i = k + 1; i < m; ++i) v[i - k] = a(i, k);
        double vnorm2 = 0.0;
        for (double t : v) vnorm2 += t * t;
        if (vnorm2 == 0.0) throw SingularMatrixError("solve_least_squares: rank deficient");

        a(k, k) = alpha;
        for (int i = k + 1; i < m; ++i) a(i, k) = 0.0;

        for (int j = k + 1; j < n; ++j) {
            double dot = 0.0;
            for (int i = k; i < m; ++i) dot += v[i - k] * a(i, j);
            double f = 2.0 * dot / vnorm2;
            for (int i = k; i < m; ++i) a(i, j) -= f * v[i - k];
        }
        double dot = 0.0;
        for (int i = k; i < m; ++i) dot += v[i - k] * rhs[i];
        double f = 2.0 * dot / vnorm2;
        for (int i = k; i < m; ++i) rhs[i] -= f * v[i - k];
    }

    const double rank_tol = 1e-13 * std::max(1.0, norm_a) * std::max(m, n);
    std::vector<double> x(n);
    for (int i = n - 1; i >= 0; --i) {
        if (std::abs(a(i, i)) <= rank_tol) {
            throw SingularMatrixError("solve_least_squares: rank deficient");
        }
        double s = rhs[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

}  // namespace tsys
