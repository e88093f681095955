#pragma once

/// Closed-form Gram matrices of exponential systems over a parallelepiped
/// A[0,1]^d:
///
///   <e_γ, e_γ'> = |det A| * prod_k φ(u_k),  u = A^T (γ - γ'),
///   φ(u) = (e^{2πiu} - 1) / (2πiu),  φ(0) = 1.
///
/// φ at exact integers is exactly 0/1 (no trig rounding), which keeps the
/// Gram of integer frequencies over the unit cube bit-exactly the identity.
/// Tiny nonzero u is evaluated by a 4-term series to dodge the cancellation
/// in e^{2πiu} - 1.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>

#include "paralattice/errors.hpp"
#include "paralattice/freq_set.hpp"
#include "paralattice/matrix.hpp"
#include "paralattice/parallel.hpp"

namespace paralattice {

/// Dense Gram size cap (desk-scale certification; larger rungs go through
/// the matrix-free ladder path).
inline constexpr std::int64_t kGramSizeCap = 5000;

/// φ(u) = (e^{2πiu} - 1)/(2πiu), φ(0) = 1. Exact integers return exactly
/// 0 or 1; |u| < 1e-8 uses the series 1 + z/2 + z²/6 + z³/24, z = 2πiu.
inline std::complex<double> gram_phi(double u) {
    if (u == std::nearbyint(u)) return u == 0.0 ? 1.0 : 0.0;
    if (std::abs(u) < 1e-8) {
        const std::complex<double> z(0.0, 2.0 * std::numbers::pi * u);
        return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
    }
    const double piu = std::numbers::pi * u;
    // (e^{2πiu}-1)/(2πiu) = e^{iπu} * sin(πu)/(πu) — cancellation-free.
    return std::complex<double>(std::cos(piu), std::sin(piu)) * (std::sin(piu) / piu);
}

/// Single Gram entry <e_γ, e_γ'> over A[0,1]^d.
inline std::complex<double> gram_entry(const Mat& a, const double* g1, const double* g2) {
    const double dt = det(a);
    if (std::abs(dt) <= singularity_threshold(a))
        throw SingularError("gram_entry: A is singular");
    std::complex<double> prod = std::abs(dt);
    for (int k = 0; k < a.n; ++k) {
        double u = 0.0;
        for (int i = 0; i < a.n; ++i) u += a.at(i, k) * (g1[i] - g2[i]);
        prod *= gram_phi(u);
    }
    return prod;
}

/// Full Hermitian Gram matrix of a frequency set (entry (i,j) for points
/// i, j). Conjugate symmetry is enforced by computing the upper triangle
/// and mirroring. Throws TooLargeError above the dense cap.
inline Eigen::MatrixXcd assemble_gram(const Mat& a, const FreqSet& gamma) {
    const std::int64_t n = gamma.size();
    if (n > kGramSizeCap)
        throw TooLargeError("assemble_gram: " + std::to_string(n) + " points exceed the dense cap " +
                            std::to_string(kGramSizeCap));
    const double dt = det(a);
    if (std::abs(dt) <= singularity_threshold(a))
        throw SingularError("assemble_gram: A is singular");
    const double adt = std::abs(dt);
    const Mat at = a.transposed();
    const int d = gamma.dim;

    Eigen::MatrixXcd g(n, n);
    parallel_for(n, [&](std::int64_t i) {
        const double* gi = gamma.point(i);
        for (std::int64_t j = i; j < n; ++j) {
            const double* gj = gamma.point(j);
            std::complex<double> prod = adt;
            for (int k = 0; k < d; ++k) {
                double u = 0.0;
                for (int c = 0; c < d; ++c) u += at.at(k, c) * (gi[c] - gj[c]);
                prod *= gram_phi(u);
            }
            g(i, j) = prod;
        }
    });
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < i; ++j) g(i, j) = std::conj(g(j, i));
    return g;
}

struct OrthogonalityReport {
    bool orthogonal = false;
    double max_offdiag = 0.0;  ///< largest off-diagonal modulus / |det A|
    double max_diag_dev = 0.0; ///< largest | diag - |det A| | / |det A|
    double tolerance = 0.0;
    std::int64_t pairs = 0; ///< distinct entries inspected
};

/// Checks whether every off-diagonal Gram entry has modulus <= tol*|det A|
/// and every diagonal equals |det A| within tol*|det A|; reports the worst
/// deviations (relative to |det A|).
///
/// Sets with pure lattice structure (points are exactly M*n over an index
/// box) use the difference fast path: the entry for (n, m) depends only on
/// n - m, so only O((4N+1)^d) distinct values exist instead of the full
/// quadratic sweep.
inline OrthogonalityReport orthogonality_report(const Mat& a, const FreqSet& gamma,
                                                double tol = kEpsNum) {
    const std::int64_t n = gamma.size();
    if (n > kGramSizeCap && !(gamma.lattice_structure && gamma.has_indices()))
        throw TooLargeError("orthogonality_report: " + std::to_string(n) +
                            " points exceed the dense cap " + std::to_string(kGramSizeCap));
    const double dt = det(a);
    if (std::abs(dt) <= singularity_threshold(a))
        throw SingularError("orthogonality_report: A is singular");
    const double adt = std::abs(dt);
    const Mat at = a.transposed();
    const int d = gamma.dim;

    OrthogonalityReport rep;
    rep.tolerance = tol;

    if (gamma.lattice_structure && gamma.has_indices()) {
        // Entry for index difference δ: |det A| * prod φ((A^T M δ)_k).
        const Mat atm = at * gamma.generator;
        const int N = gamma.index_radius;
        double max_off = 0.0;
        std::vector<long long> delta(static_cast<std::size_t>(d), -2LL * N);
        while (true) {
            bool zero = true;
            for (int k = 0; k < d; ++k)
                if (delta[static_cast<std::size_t>(k)] != 0) { zero = false; break; }
            if (!zero) {
                std::complex<double> prod = adt;
                for (int k = 0; k < d; ++k) {
                    double u = 0.0;
                    for (int c = 0; c < d; ++c)
                        u += atm.at(k, c) * static_cast<double>(delta[static_cast<std::size_t>(c)]);
                    prod *= gram_phi(u);
                }
                max_off = std::max(max_off, std::abs(prod));
                ++rep.pairs;
            }
            int k = d - 1;
            while (k >= 0) {
                auto ku = static_cast<std::size_t>(k);
                if (++delta[ku] <= 2LL * N) break;
                delta[ku] = -2LL * N;
                --k;
            }
            if (k < 0) break;
        }
        rep.max_offdiag = max_off / adt;
        rep.max_diag_dev = 0.0; // diagonal is exactly |det A| (φ(0) = 1)
        rep.orthogonal = rep.max_offdiag <= tol;
        return rep;
    }

    const unsigned workers = worker_count();
    std::vector<double> max_off(workers, 0.0);
    std::vector<double> max_diag(workers, 0.0);
    const std::int64_t chunk = (n + workers - 1) / workers;
    parallel_for(static_cast<std::int64_t>(workers), [&](std::int64_t w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min<std::int64_t>(lo + chunk, n);
        for (std::int64_t i = lo; i < hi; ++i) {
            const double* gi = gamma.point(i);
            for (std::int64_t j = i; j < n; ++j) {
                const double* gj = gamma.point(j);
                std::complex<double> prod = adt;
                for (int k = 0; k < d; ++k) {
                    double u = 0.0;
                    for (int c = 0; c < d; ++c) u += at.at(k, c) * (gi[c] - gj[c]);
                    prod *= gram_phi(u);
                }
                if (i == j)
                    max_diag[static_cast<std::size_t>(w)] =
                        std::max(max_diag[static_cast<std::size_t>(w)], std::abs(prod - adt));
                else
                    max_off[static_cast<std::size_t>(w)] =
                        std::max(max_off[static_cast<std::size_t>(w)], std::abs(prod));
            }
        }
    });
    double off = 0.0, diag = 0.0;
    for (unsigned w = 0; w < workers; ++w) {
        off = std::max(off, max_off[w]);
        diag = std::max(diag, max_diag[w]);
    }
    rep.max_offdiag = off / adt;
    rep.max_diag_dev = diag / adt;
    rep.pairs = n * (n + 1) / 2;
    rep.orthogonal = rep.max_offdiag <= tol && rep.max_diag_dev <= tol;
    return rep;
}

/// Boolean wrapper over orthogonality_report.
inline bool orthogonality_test(const Mat& a, const FreqSet& gamma, double tol = kEpsNum) {
    return orthogonality_report(a, gamma, tol).orthogonal;
}

} // namespace paralattice
