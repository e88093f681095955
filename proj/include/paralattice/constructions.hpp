#pragma once

/// Frequency-set constructions:
///  - rounded dual lattice r(H^{-T} Z^d) for lower-triangular H with
///    diagonals in (0,1],
///  - rectangular rounded lattices r(1/a_11 Z + d_1) x ... x r(1/a_dd Z + d_d),
///  - lifts C -> B R^T C into a prescribed lattice B Z^d,
///  - roundings r(A^{-T} Z^d) admissible under the spectral-norm threshold
///    ||A||_2 < 2 ln2 / (pi d^{3/2}),
///  - tensor products of 1-D sets.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "paralattice/errors.hpp"
#include "paralattice/freq_set.hpp"
#include "paralattice/lattice.hpp"
#include "paralattice/matrix.hpp"

namespace paralattice {

/// Admissibility threshold for rounding a dual lattice in dimension d:
/// 2 ln2 / (pi d^{3/2}) (approximately 0.1560 at d = 2).
inline double spectral_norm_threshold(int d) {
    return 2.0 * std::numbers::ln2 / (std::numbers::pi * std::pow(static_cast<double>(d), 1.5));
}

/// r(H^{-T} Z^d) truncated to indices |n_k| <= N. Requires H lower
/// triangular with diagonals in (0,1] — this guarantees the rounding is
/// injective, so a rounding collision here is an internal inconsistency.
inline FreqSet rounded_dual_construction(const Mat& h, int N, double tol = kEpsNum) {
    const MatClass hc = classify_matrix(h, tol);
    if (!hc.is_lower_triangular || !hc.diag_in_unit_interval)
        throw BadStructureError(
            "rounded_dual_construction: H must be lower triangular with diagonals in (0,1]");
    FreqSet s = rounded_lattice(inv_transpose(h), N);
    s.provenance = Provenance::RoundedDual;
    return s;
}

/// Cartesian product of 1-D rounded shifted lattices
/// r(1/a_1 Z + off_1) x ... x r(1/a_d Z + off_d), each factor truncated to
/// the index window [-N, N]. Requires every a_k in (0, 1].
inline FreqSet rectangular_construction(const std::vector<double>& diag,
                                        const std::vector<double>& offsets, int N) {
    const int d = static_cast<int>(diag.size());
    if (d == 0 || d > kMaxDim)
        throw BadDiagonalError("rectangular_construction: dimension must be in [1, 8]");
    if (!offsets.empty() && static_cast<int>(offsets.size()) != d)
        throw BadDiagonalError("rectangular_construction: offsets size mismatch");
    for (double a : diag)
        if (!(a > 0.0 && a <= 1.0))
            throw BadDiagonalError("rectangular_construction: diagonal entries must lie in (0,1]");

    // Build each 1-D factor, then take the lexicographic cartesian product.
    std::vector<std::vector<long long>> factors(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        const double step = 1.0 / diag[static_cast<std::size_t>(k)];
        const double off = offsets.empty() ? 0.0 : offsets[static_cast<std::size_t>(k)];
        auto& vals = factors[static_cast<std::size_t>(k)];
        vals.reserve(2 * static_cast<std::size_t>(N) + 1);
        long long prev = 0;
        for (long long n = -N; n <= N; ++n) {
            const long long v = round_half_up(step * static_cast<double>(n) + off);
            if (n > -N && v == prev)
                throw DuplicateAfterRoundingError(
                    {n - 1}, {n},
                    "rectangular_construction: rounding collision in factor " + std::to_string(k));
            vals.push_back(v);
            prev = v;
        }
    }

    FreqSet s;
    s.dim = d;
    s.provenance = Provenance::Rectangular;
    s.index_radius = N;
    s.integral = true;
    std::vector<long long> n(static_cast<std::size_t>(d), -N);
    while (true) {
        std::array<double, kMaxDim> p{};
        std::array<long long, kMaxDim> in{};
        for (int k = 0; k < d; ++k) {
            p[k] = static_cast<double>(factors[static_cast<std::size_t>(k)]
                                           [static_cast<std::size_t>(n[static_cast<std::size_t>(k)] + N)]);
            in[k] = n[static_cast<std::size_t>(k)];
        }
        s.push_point(p.data());
        s.push_index(in.data());
        int k = d - 1;
        while (k >= 0) {
            auto ku = static_cast<std::size_t>(k);
            if (++n[ku] <= N) break;
            n[ku] = -N;
            --k;
        }
        if (k < 0) break;
    }
    return s;
}

/// Lift an integer set C into the prescribed lattice B Z^d:
/// points { B R^T c : c in C }. R must be integer and nonsingular; the lift
/// is injective, so cardinality is preserved.
inline FreqSet lift_frequencies(const FreqSet& c, const Mat& r, const Mat& b,
                                double tol = kEpsNum) {
    if (!c.integral)
        throw OutOfRangeError("lift_frequencies: base set must be integer-valued");
    if (!classify_matrix(r, tol).is_integer)
        throw OutOfRangeError("lift_frequencies: R must have integer entries");
    if (std::abs(det(r)) <= singularity_threshold(r) || std::abs(det(b)) <= singularity_threshold(b))
        throw SingularError("lift_frequencies: R and B must be nonsingular");

    const Mat brt = b * r.transposed();
    const bool integral_map = classify_matrix(brt, 0.0).is_integer;

    FreqSet out;
    out.dim = c.dim;
    out.provenance = Provenance::Lifted;
    out.index_radius = c.index_radius;
    out.integral = integral_map;
    out.idx = c.idx;
    out.pts.reserve(c.pts.size());
    for (std::int64_t i = 0; i < c.size(); ++i) {
        const double* x = c.point(i);
        std::array<double, kMaxDim> y{};
        for (int rr = 0; rr < c.dim; ++rr) {
            double acc = 0.0;
            for (int cc = 0; cc < c.dim; ++cc) acc += brt.at(rr, cc) * x[cc];
            y[rr] = integral_map ? std::round(acc) : acc;
        }
        out.push_point(y.data());
    }
    return out;
}

/// r(A^{-T} Z^d) under the admissibility requirement
/// ||A||_2 < 2 ln2/(pi d^{3/2}); throws NormTooLargeError (with the measured
/// norm and the threshold) otherwise.
inline FreqSet spectral_norm_construction(const Mat& a, int N) {
    const double norm = spectral_norm(a);
    const double threshold = spectral_norm_threshold(a.n);
    if (!(norm < threshold))
        throw NormTooLargeError(norm, threshold,
                                "spectral_norm_construction: ||A||_2 = " + std::to_string(norm) +
                                    " >= threshold " + std::to_string(threshold));
    FreqSet s = rounded_lattice(inv_transpose(a), N);
    s.provenance = Provenance::SpectralNorm;
    return s;
}

/// Cartesian product of d one-dimensional sets, ordered lexicographically
/// (first factor slowest). Point count is the product of factor sizes.
inline FreqSet tensor_product(const std::vector<FreqSet>& sets) {
    const int d = static_cast<int>(sets.size());
    if (d == 0 || d > kMaxDim)
        throw OutOfRangeError("tensor_product: need between 1 and 8 factors");
    bool integral = true;
    int radius = 0;
    for (const FreqSet& f : sets) {
        if (f.dim != 1)
            throw OutOfRangeError("tensor_product: every factor must be 1-D");
        integral = integral && f.integral;
        radius = std::max(radius, f.index_radius);
    }
    FreqSet out;
    out.dim = d;
    out.provenance = Provenance::Tensor;
    out.index_radius = radius;
    out.integral = integral;

    std::vector<std::int64_t> pos(static_cast<std::size_t>(d), 0);
    while (true) {
        std::array<double, kMaxDim> p{};
        for (int k = 0; k < d; ++k)
            p[k] = sets[static_cast<std::size_t>(k)].pts[static_cast<std::size_t>(pos[static_cast<std::size_t>(k)])];
        out.push_point(p.data());
        int k = d - 1;
        while (k >= 0) {
            auto ku = static_cast<std::size_t>(k);
            if (++pos[ku] < sets[ku].size()) break;
            pos[ku] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return out;
}

} // namespace paralattice
