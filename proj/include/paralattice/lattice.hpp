#pragma once

/// Lattice enumeration, the rounding map r(x) = floor(x + 1/2), rounded
/// lattices, Beatty sequences floor((k+beta)/alpha), and window-based
/// density estimation.
///
/// Enumeration truncates the generating index set n in [-N, N]^d (not the
/// image coordinates) and orders points lexicographically by index, so
/// output order is deterministic and lifts R^T n remain well-defined.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "paralattice/errors.hpp"
#include "paralattice/freq_set.hpp"
#include "paralattice/matrix.hpp"

namespace paralattice {

/// Rounding to the nearest integer with halves rounded up:
/// r(x) = floor(x + 1/2). Requires |x| < 2^52.
inline long long round_half_up(double x) {
    return static_cast<long long>(std::floor(x + 0.5));
}

/// Componentwise vector form of the rounding map.
inline void round_half_up(const double* x, int dim, long long* out) {
    for (int k = 0; k < dim; ++k) out[k] = round_half_up(x[k]);
}

namespace detail {

/// Odometer over the index box [-N, N]^d in lexicographic order.
/// Calls fn(n) for every index vector.
inline void for_each_index(int dim, int N, const std::function<void(const long long*)>& fn) {
    std::vector<long long> n(static_cast<std::size_t>(dim), -N);
    while (true) {
        fn(n.data());
        int k = dim - 1;
        while (k >= 0) {
            if (++n[static_cast<std::size_t>(k)] <= N) break;
            n[static_cast<std::size_t>(k)] = -N;
            --k;
        }
        if (k < 0) break;
    }
}

/// Hash key for an integer point (used for rounding-collision detection).
inline std::string int_point_key(const long long* p, int dim) {
    return std::string(reinterpret_cast<const char*>(p),
                       sizeof(long long) * static_cast<std::size_t>(dim));
}

} // namespace detail

/// The truncated lattice {M n : n in Z^d, |n_k| <= N}, (2N+1)^d points,
/// ordered lexicographically by index. Throws SingularError for singular M.
inline FreqSet lattice_points(const Mat& m, int N) {
    if (std::abs(det(m)) <= singularity_threshold(m))
        throw SingularError("lattice_points: generator matrix is singular");
    FreqSet s;
    s.dim = m.n;
    s.provenance = Provenance::Explicit;
    s.index_radius = N;
    s.lattice_structure = true;
    s.generator = m;
    const std::int64_t count = [&] {
        std::int64_t c = 1;
        for (int k = 0; k < m.n; ++k) c *= (2LL * N + 1);
        return c;
    }();
    s.pts.reserve(static_cast<std::size_t>(count * m.n));
    s.idx.reserve(static_cast<std::size_t>(count * m.n));
    bool all_integral = true;
    detail::for_each_index(m.n, N, [&](const long long* n) {
        std::array<double, kMaxDim> x{};
        for (int i = 0; i < m.n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < m.n; ++j) acc += m.at(i, j) * static_cast<double>(n[j]);
            x[i] = acc;
            if (x[i] != std::floor(x[i])) all_integral = false;
        }
        s.push_point(x.data());
        s.push_index(n);
    });
    s.integral = all_integral;
    return s;
}

/// Round every point of the truncated lattice M Z^d to its closest integer
/// point. Throws DuplicateAfterRoundingError (with both colliding index
/// vectors) when two indices round to the same point — the signature of a
/// lattice spacing below 1 in some direction.
inline FreqSet rounded_lattice(const Mat& m, int N) {
    if (std::abs(det(m)) <= singularity_threshold(m))
        throw SingularError("rounded_lattice: generator matrix is singular");
    FreqSet s;
    s.dim = m.n;
    s.provenance = Provenance::Explicit;
    s.index_radius = N;
    s.integral = true;
    std::unordered_map<std::string, std::vector<long long>> seen;
    detail::for_each_index(m.n, N, [&](const long long* n) {
        std::array<double, kMaxDim> x{};
        std::array<long long, kMaxDim> p{};
        for (int i = 0; i < m.n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < m.n; ++j) acc += m.at(i, j) * static_cast<double>(n[j]);
            x[i] = acc;
        }
        round_half_up(x.data(), m.n, p.data());
        const std::string key = detail::int_point_key(p.data(), m.n);
        std::vector<long long> nv(n, n + m.n);
        auto [it, inserted] = seen.emplace(key, nv);
        if (!inserted)
            throw DuplicateAfterRoundingError(
                it->second, nv,
                "rounded_lattice: indices collide after rounding (spacing < 1)");
        std::array<double, kMaxDim> pd{};
        for (int i = 0; i < m.n; ++i) pd[i] = static_cast<double>(p[i]);
        s.push_point(pd.data());
        s.push_index(n);
    });
    return s;
}

/// Beatty sequence {floor((k+beta)/alpha) : k_min <= k <= k_max}, sorted
/// ascending (automatic: consecutive terms differ by at least 1/alpha >= 1)
/// and duplicate-free. Requires 0 < alpha <= 1.
///
/// The quotient is floored with a 1e-9 upward snap: rational parameters
/// passed as decimals (e.g. alpha = 2/3) otherwise land a few ulps below
/// exact integers and floor() would drop a full unit. Irrational parameters
/// are unaffected (their quotients do not approach integers within 1e-9 on
/// any realistic window).
inline FreqSet beatty_fraenkel(double alpha, double beta, long long k_min, long long k_max) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw BadAlphaError("beatty_fraenkel: alpha must lie in (0, 1], got " +
                            std::to_string(alpha));
    constexpr double kFloorSnap = 1e-9;
    FreqSet s;
    s.dim = 1;
    s.provenance = Provenance::Explicit;
    s.index_radius = static_cast<int>(std::max(std::llabs(k_min), std::llabs(k_max)));
    s.integral = true;
    for (long long k = k_min; k <= k_max; ++k) {
        const double q = (static_cast<double>(k) + beta) / alpha;
        const double v = std::floor(q + kFloorSnap);
        s.pts.push_back(v);
        s.idx.push_back(k);
    }
    return s;
}

/// A point counter: number of set points inside the centered cube [-r, r]^d.
using PointCounter = std::function<std::int64_t(double)>;

/// Density estimates over a ladder of centered cubes [-r, r]^d.
struct DensityReport {
    std::vector<double> window_radii;   // strictly increasing
    std::vector<std::int64_t> counts;   // points per window
    std::vector<double> estimates;      // counts / (2r)^d, exactly
    double extrapolated = 0.0;          // estimate at the largest radius
};

/// Count points of a generator inside growing centered cubes. The generator
/// rule (not a fixed truncation) supplies the counts, so every window is
/// complete by construction.
inline DensityReport density_estimate(int dim, const PointCounter& counter,
                                      const std::vector<double>& window_radii) {
    DensityReport rep;
    rep.window_radii = window_radii;
    double prev = 0.0;
    for (double r : window_radii) {
        if (!(r > prev))
            throw OutOfRangeError("density_estimate: radii must be positive and increasing");
        prev = r;
        const std::int64_t c = counter(r);
        rep.counts.push_back(c);
        double vol = 1.0;
        for (int k = 0; k < dim; ++k) vol *= 2.0 * r;
        rep.estimates.push_back(static_cast<double>(c) / vol);
    }
    rep.extrapolated = rep.estimates.empty() ? 0.0 : rep.estimates.back();
    return rep;
}

/// Counter for the rounded lattice r(M Z^d): enumerates the exact index
/// preimage of the window (|n| bounded by the inverse images of the cube
/// corners) and counts rounded points with max-norm <= r.
inline PointCounter make_rounded_lattice_counter(const Mat& m) {
    const Mat mi = inv(m);
    return [m, mi](double r) -> std::int64_t {
        const int d = m.n;
        // |n_k| = |(M^{-1} x)_k| <= sum_j |mi_kj| * (r + 1/2) for x in the
        // half-unit-inflated window (rounding moves points by at most 1/2).
        std::vector<long long> bound(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            double row = 0.0;
            for (int j = 0; j < d; ++j) row += std::abs(mi.at(k, j));
            bound[static_cast<std::size_t>(k)] =
                static_cast<long long>(std::ceil(row * (r + 0.5))) + 1;
        }
        std::int64_t count = 0;
        std::vector<long long> n(static_cast<std::size_t>(d));
        for (std::size_t k = 0; k < n.size(); ++k) n[k] = -bound[k];
        while (true) {
            std::int64_t inside = 1;
            for (int i = 0; i < d && inside; ++i) {
                double acc = 0.0;
                for (int j = 0; j < d; ++j) acc += m.at(i, j) * static_cast<double>(n[static_cast<std::size_t>(j)]);
                const long long p = round_half_up(acc);
                if (std::llabs(p) > static_cast<long long>(r)) inside = 0;
            }
            count += inside;
            int k = d - 1;
            while (k >= 0) {
                auto ku = static_cast<std::size_t>(k);
                if (++n[ku] <= bound[ku]) break;
                n[ku] = -bound[ku];
                --k;
            }
            if (k < 0) break;
        }
        return count;
    };
}

/// Counter for the pure lattice M Z^d (no rounding); window test on the
/// exact image coordinates.
inline PointCounter make_lattice_counter(const Mat& m) {
    const Mat mi = inv(m);
    return [m, mi](double r) -> std::int64_t {
        const int d = m.n;
        std::vector<long long> bound(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            double row = 0.0;
            for (int j = 0; j < d; ++j) row += std::abs(mi.at(k, j));
            bound[static_cast<std::size_t>(k)] =
                static_cast<long long>(std::ceil(row * r)) + 1;
        }
        std::int64_t count = 0;
        std::vector<long long> n(static_cast<std::size_t>(d));
        for (std::size_t k = 0; k < n.size(); ++k) n[k] = -bound[k];
        while (true) {
            bool inside = true;
            for (int i = 0; i < d && inside; ++i) {
                double acc = 0.0;
                for (int j = 0; j < d; ++j) acc += m.at(i, j) * static_cast<double>(n[static_cast<std::size_t>(j)]);
                if (std::abs(acc) > r) inside = false;
            }
            if (inside) ++count;
            int k = d - 1;
            while (k >= 0) {
                auto ku = static_cast<std::size_t>(k);
                if (++n[ku] <= bound[ku]) break;
                n[ku] = -bound[ku];
                --k;
            }
            if (k < 0) break;
        }
        return count;
    };
}

/// Counter for a Beatty sequence floor((Z+beta)/alpha).
inline PointCounter make_beatty_counter(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw BadAlphaError("make_beatty_counter: alpha must lie in (0, 1]");
    return [alpha, beta](double r) -> std::int64_t {
        // floor((k+beta)/alpha) in [-r, r] requires k in roughly [-r*alpha, r*alpha].
        const long long lo = static_cast<long long>(std::floor(-r * alpha - std::abs(beta))) - 2;
        const long long hi = static_cast<long long>(std::ceil(r * alpha + std::abs(beta))) + 2;
        constexpr double kFloorSnap = 1e-9;
        std::int64_t count = 0;
        for (long long k = lo; k <= hi; ++k) {
            const double v = std::floor((static_cast<double>(k) + beta) / alpha + kFloorSnap);
            if (std::abs(v) <= r) ++count;
        }
        return count;
    };
}

/// Counter over a fixed finite set. Only valid for radii inside the set's
/// truncation; callers are responsible for choosing windows the stored
/// truncation actually covers.
inline PointCounter make_set_counter(const FreqSet& s) {
    return [s](double r) -> std::int64_t {
        std::int64_t count = 0;
        for (std::int64_t i = 0; i < s.size(); ++i) {
            const double* p = s.point(i);
            bool inside = true;
            for (int k = 0; k < s.dim; ++k)
                if (std::abs(p[k]) > r) { inside = false; break; }
            if (inside) ++count;
        }
        return count;
    };
}

} // namespace paralattice
