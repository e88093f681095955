#pragma once

/// Witnesses of the parallelepiped decomposition A[0,1]^d = B^{-T}R^{-1}H[0,1]^d:
/// verification of user-supplied witnesses and a restricted heuristic search.
///
/// Orthogonal mode requires H lower unitriangular; Riesz mode requires H
/// lower triangular with diagonals in (0,1]. Two nonsingular matrices span
/// the same parallelepiped (with vertex 0) exactly when they differ by a
/// column permutation, which is what parallelepiped_equal tests.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "paralattice/errors.hpp"
#include "paralattice/matrix.hpp"

namespace paralattice {

enum class WitnessMode { Orthogonal, Riesz };

inline const char* witness_mode_name(WitnessMode m) {
    return m == WitnessMode::Orthogonal ? "orthogonal" : "riesz";
}

struct Witness {
    Mat R;                  // integer, nonsingular
    Mat H;                  // unitriangular (orthogonal) or diag in (0,1] (riesz)
    std::vector<int> P;     // column permutation as index array
    WitnessMode mode = WitnessMode::Riesz;
};

struct WitnessReport {
    bool accepted = false;
    std::vector<std::string> failures; // named violated clauses; empty iff accepted
    double residual = 0.0;             // max deviation of the permutation test
};

namespace detail {

/// Max entrywise distance of M from the nearest permutation matrix
/// (per column: nearest candidate keeps the largest entry as the 1).
inline double permutation_residual(const Mat& m) {
    double res = 0.0;
    std::vector<bool> used(static_cast<std::size_t>(m.n), false);
    for (int k = 0; k < m.n; ++k) {
        int best = 0;
        for (int i = 1; i < m.n; ++i)
            if (std::abs(m.at(i, k)) > std::abs(m.at(best, k))) best = i;
        for (int i = 0; i < m.n; ++i) {
            const double target = (i == best && !used[static_cast<std::size_t>(best)]) ? 1.0 : 0.0;
            res = std::max(res, std::abs(m.at(i, k) - target));
        }
        used[static_cast<std::size_t>(best)] = true;
    }
    return res;
}

} // namespace detail

/// True iff A[0,1]^d and M[0,1]^d are the same parallelepiped, i.e.
/// M^{-1}A is a permutation matrix within tol. (Both parallelepipeds have 0
/// as a vertex; the linear cube symmetries fixing that vertex are exactly
/// the coordinate permutations, so set equality is M = A*P for some
/// permutation P.)
inline bool parallelepiped_equal(const Mat& a, const Mat& m, double tol = kEpsNum) {
    const Mat q = inv(m) * a;
    return classify_matrix(q, tol).is_permutation;
}

/// Verify a witness: (a) R integer and nonsingular, (b) H structured per
/// mode, (c) A*P spans the same parallelepiped as B^{-T} R^{-1} H.
/// failures lists each violated clause by name.
inline WitnessReport check_witness(const Mat& a, const Mat& b, const Witness& w,
                                   double tol = kEpsNum) {
    WitnessReport rep;

    const MatClass rc = classify_matrix(w.R, tol);
    if (!rc.is_integer) rep.failures.emplace_back("integer_R");
    Mat r_rounded = w.R;
    for (int i = 0; i < r_rounded.n * r_rounded.n; ++i)
        r_rounded.a[static_cast<std::size_t>(i)] = std::round(r_rounded.a[static_cast<std::size_t>(i)]);
    if (std::abs(det(r_rounded)) < 0.5) rep.failures.emplace_back("nonsingular_R");

    const MatClass hc = classify_matrix(w.H, tol);
    if (w.mode == WitnessMode::Orthogonal) {
        if (!hc.is_unitriangular) rep.failures.emplace_back("unitriangular");
    } else {
        if (!hc.is_lower_triangular) rep.failures.emplace_back("lower_triangular");
        if (!hc.diag_in_unit_interval) rep.failures.emplace_back("diag_in_unit_interval");
    }

    bool p_ok = static_cast<int>(w.P.size()) == a.n;
    if (p_ok) {
        std::vector<int> sorted = w.P;
        std::sort(sorted.begin(), sorted.end());
        for (int i = 0; i < a.n; ++i)
            if (sorted[static_cast<std::size_t>(i)] != i) p_ok = false;
    }
    if (!p_ok) rep.failures.emplace_back("permutation_P");

    if (rep.failures.empty()) {
        try {
            const Mat ap = a * perm_matrix(w.P);
            const Mat target = inv_transpose(b) * inv(r_rounded) * w.H;
            rep.residual = detail::permutation_residual(inv(target) * ap);
            if (!parallelepiped_equal(ap, target, tol))
                rep.failures.emplace_back("parallelepiped_equal");
        } catch (const SingularError&) {
            rep.failures.emplace_back("parallelepiped_equal");
        }
    }

    rep.accepted = rep.failures.empty();
    return rep;
}

/// Restricted witness search: R = identity and all d! column permutations P
/// in lexicographic order; accepts the first P for which B^T A P passes the
/// mode's structural test. Returns false when the restricted search fails —
/// which does NOT prove that no witness exists.
inline bool find_witness_heuristic(const Mat& a, const Mat& b, WitnessMode mode,
                                   Witness& out, double tol = kEpsNum) {
    std::vector<int> p(static_cast<std::size_t>(a.n));
    std::iota(p.begin(), p.end(), 0);
    const Mat bt_a = b.transposed() * a;
    do {
        const Mat h = bt_a * perm_matrix(p);
        const MatClass hc = classify_matrix(h, tol);
        const bool ok = (mode == WitnessMode::Orthogonal)
                            ? hc.is_unitriangular
                            : (hc.is_lower_triangular && hc.diag_in_unit_interval);
        if (ok) {
            out.R = Mat::identity(a.n);
            out.H = h;
            out.P = p;
            out.mode = mode;
            return true;
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return false;
}

} // namespace paralattice
