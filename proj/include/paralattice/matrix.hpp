#pragma once

/// Small dense matrices (dimension <= 8) for parallelepiped geometry:
/// determinants, inverses, spectral norms, and structural classification
/// (triangular / unitriangular / permutation / diagonal-in-(0,1]).
///
/// All operations are pure functions of immutable values and safe to share
/// across threads. Storage is row-major in a fixed-capacity array.

#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "paralattice/errors.hpp"

namespace paralattice {

inline constexpr int kMaxDim = 8;

/// Default entrywise comparison tolerance. Every tolerance in the library is
/// caller-overridable; this is only the default.
inline constexpr double kEpsNum = 1e-9;

/// Row-major square matrix of dimension n <= kMaxDim.
struct Mat {
    int n = 0;
    std::array<double, kMaxDim * kMaxDim> a{};

    Mat() = default;
    explicit Mat(int dim) : n(dim) { a.fill(0.0); }

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    static Mat identity(int dim) {
        Mat m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }

    /// Build from nested initializer-style rows (used heavily in tests).
    static Mat from_rows(const std::vector<std::vector<double>>& rows) {
        Mat m(static_cast<int>(rows.size()));
        for (int i = 0; i < m.n; ++i)
            for (int j = 0; j < m.n; ++j) m.at(i, j) = rows[i][j];
        return m;
    }

    Mat transposed() const {
        Mat t(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    double max_abs_entry() const {
        double m = 0.0;
        for (int i = 0; i < n * n; ++i) m = std::max(m, std::abs(a[i]));
        return m;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (int i = 0; i < n; ++i) {
            os << (i ? ", [" : "[");
            for (int j = 0; j < n; ++j) os << (j ? ", " : "") << at(i, j);
            os << "]";
        }
        os << "]";
        return os.str();
    }
};

inline Mat operator*(const Mat& x, const Mat& y) {
    Mat r(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) {
            double s = 0.0;
            for (int k = 0; k < x.n; ++k) s += x.at(i, k) * y.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

inline Mat operator*(double c, const Mat& m) {
    Mat r = m;
    for (int i = 0; i < m.n * m.n; ++i) r.a[i] *= c;
    return r;
}

/// y = M x for a length-n vector x.
inline std::array<double, kMaxDim> mat_vec(const Mat& m, const std::array<double, kMaxDim>& x) {
    std::array<double, kMaxDim> y{};
    for (int i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.n; ++j) s += m.at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

/// Permutation matrix from a column-index array: column k of the result is
/// the standard basis vector e_{p[k]}, so (A * perm_matrix(p)) has column k
/// equal to column p[k] of A.
inline Mat perm_matrix(const std::vector<int>& p) {
    Mat m(static_cast<int>(p.size()));
    for (int k = 0; k < m.n; ++k) m.at(p[k], k) = 1.0;
    return m;
}

/// Scale-aware singularity threshold: 1e-12 * max|entry|^d.
inline double singularity_threshold(const Mat& m) {
    double s = 1e-12;
    const double mx = m.max_abs_entry();
    for (int i = 0; i < m.n; ++i) s *= mx;
    return s;
}

/// Determinant by Gaussian elimination with partial pivoting.
inline double det(const Mat& m) {
    Mat w = m;
    double sign = 1.0;
    double d = 1.0;
    for (int col = 0; col < w.n; ++col) {
        int piv = col;
        for (int r = col + 1; r < w.n; ++r)
            if (std::abs(w.at(r, col)) > std::abs(w.at(piv, col))) piv = r;
        if (w.at(piv, col) == 0.0) return 0.0;
        if (piv != col) {
            for (int j = 0; j < w.n; ++j) std::swap(w.at(piv, j), w.at(col, j));
            sign = -sign;
        }
        d *= w.at(col, col);
        for (int r = col + 1; r < w.n; ++r) {
            const double f = w.at(r, col) / w.at(col, col);
            for (int j = col; j < w.n; ++j) w.at(r, j) -= f * w.at(col, j);
        }
    }
    return sign * d;
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
/// Throws SingularError when |det| <= 1e-12 * max|entry|^d.
inline Mat inv(const Mat& m) {
    const double dt = det(m);
    if (std::abs(dt) <= singularity_threshold(m))
        throw SingularError("matrix is singular (|det| = " + std::to_string(std::abs(dt)) + ")");
    Mat w = m;
    Mat r = Mat::identity(m.n);
    for (int col = 0; col < w.n; ++col) {
        int piv = col;
        for (int k = col + 1; k < w.n; ++k)
            if (std::abs(w.at(k, col)) > std::abs(w.at(piv, col))) piv = k;
        if (w.at(piv, col) == 0.0)
            throw SingularError("matrix is singular (zero pivot)");
        if (piv != col) {
            for (int j = 0; j < w.n; ++j) {
                std::swap(w.at(piv, j), w.at(col, j));
                std::swap(r.at(piv, j), r.at(col, j));
            }
        }
        const double p = w.at(col, col);
        for (int j = 0; j < w.n; ++j) {
            w.at(col, j) /= p;
            r.at(col, j) /= p;
        }
        for (int k = 0; k < w.n; ++k) {
            if (k == col) continue;
            const double f = w.at(k, col);
            if (f == 0.0) continue;
            for (int j = 0; j < w.n; ++j) {
                w.at(k, j) -= f * w.at(col, j);
                r.at(k, j) -= f * r.at(col, j);
            }
        }
    }
    return r;
}

/// inv(M)^T — the dual-lattice generator for the lattice M Z^d.
inline Mat inv_transpose(const Mat& m) { return inv(m).transposed(); }

namespace detail {

/// One power-iteration run on S = M^T M from a fixed start vector.
/// Returns the largest eigenvalue estimate of S, or -1 on non-convergence.
inline double power_iteration_mtm(const Mat& s, std::array<double, kMaxDim> v,
                                  int cap, double rel_tol) {
    const int n = s.n;
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += v[i] * v[i];
    norm = std::sqrt(norm);
    for (int i = 0; i < n; ++i) v[i] /= norm;

    double lambda_prev = -1.0;
    for (int it = 0; it < cap; ++it) {
        std::array<double, kMaxDim> w = mat_vec(s, v);
        double wn = 0.0;
        for (int i = 0; i < n; ++i) wn += w[i] * w[i];
        wn = std::sqrt(wn);
        if (wn == 0.0) return 0.0; // M^T M annihilates v entirely
        const double lambda = wn;  // ||S v|| with ||v|| = 1 and S PSD
        for (int i = 0; i < n; ++i) v[i] = w[i] / wn;
        if (lambda_prev >= 0.0 && std::abs(lambda - lambda_prev) <= rel_tol * lambda)
            return lambda;
        lambda_prev = lambda;
    }
    return -1.0;
}

} // namespace detail

/// Largest singular value via power iteration on M^T M, relative tolerance
/// 1e-10, iteration cap 10000. Two deterministic starts (all-ones and
/// (1,2,...,d)) are run and the larger result returned, because a single
/// fixed start can be exactly orthogonal to the dominant singular vector.
inline double spectral_norm(const Mat& m) {
    if (m.max_abs_entry() == 0.0) return 0.0;
    Mat s(m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < m.n; ++k) acc += m.at(k, i) * m.at(k, j);
            s.at(i, j) = acc;
        }
    constexpr int kCap = 10000;
    constexpr double kRelTol = 1e-10;

    std::array<double, kMaxDim> ones{};
    std::array<double, kMaxDim> ramp{};
    for (int i = 0; i < m.n; ++i) {
        ones[i] = 1.0;
        ramp[i] = static_cast<double>(i + 1);
    }
    const double l1 = detail::power_iteration_mtm(s, ones, kCap, kRelTol);
    const double l2 = detail::power_iteration_mtm(s, ramp, kCap, kRelTol);
    if (l1 < 0.0 && l2 < 0.0)
        throw NonConvergenceError("spectral_norm: power iteration cap exceeded");
    return std::sqrt(std::max(l1, l2));
}

/// Structural flags, each true iff the property holds with entrywise
/// tolerance tol. diag_in_unit_interval uses the half-open test
/// d_ii in (tol, 1 + tol] (closed upper end).
struct MatClass {
    bool is_integer = false;
    bool is_lower_triangular = false;
    bool is_unitriangular = false;
    bool is_permutation = false;
    bool diag_in_unit_interval = false;
};

inline MatClass classify_matrix(const Mat& m, double tol = kEpsNum) {
    MatClass c;
    const int n = m.n;

    c.is_integer = true;
    for (int i = 0; i < n * n; ++i)
        if (std::abs(m.a[i] - std::round(m.a[i])) > tol) { c.is_integer = false; break; }

    c.is_lower_triangular = true;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(m.at(i, j)) > tol) { c.is_lower_triangular = false; }

    c.is_unitriangular = c.is_lower_triangular;
    for (int i = 0; i < n && c.is_unitriangular; ++i)
        if (std::abs(m.at(i, i) - 1.0) > tol) c.is_unitriangular = false;

    c.diag_in_unit_interval = true;
    for (int i = 0; i < n; ++i) {
        const double d = m.at(i, i);
        if (!(d > tol && d <= 1.0 + tol)) c.diag_in_unit_interval = false;
    }

    // Permutation: in every column exactly one entry within tol of 1, the
    // rest within tol of 0, and the selected rows distinct.
    c.is_permutation = true;
    std::array<bool, kMaxDim> row_used{};
    for (int k = 0; k < n && c.is_permutation; ++k) {
        int one_row = -1;
        for (int i = 0; i < n; ++i) {
            const double v = m.at(i, k);
            if (std::abs(v - 1.0) <= tol) {
                if (one_row >= 0) { c.is_permutation = false; break; }
                one_row = i;
            } else if (std::abs(v) > tol) {
                c.is_permutation = false;
                break;
            }
        }
        if (!c.is_permutation) break;
        if (one_row < 0 || row_used[one_row]) { c.is_permutation = false; break; }
        row_used[one_row] = true;
    }
    return c;
}

/// Extract the column-index array of a (near-)permutation matrix:
/// result[k] = row of the 1-entry in column k. Caller must have verified
/// is_permutation first.
inline std::vector<int> perm_indices(const Mat& m, double tol = kEpsNum) {
    std::vector<int> p(static_cast<std::size_t>(m.n), -1);
    for (int k = 0; k < m.n; ++k)
        for (int i = 0; i < m.n; ++i)
            if (std::abs(m.at(i, k) - 1.0) <= tol) p[static_cast<std::size_t>(k)] = i;
    return p;
}

} // namespace paralattice
