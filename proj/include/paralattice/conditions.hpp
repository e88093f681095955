#pragma once

/// Admissibility condition checks for perturbed integer frequencies:
///  - Kadec quarter condition    sup |gamma_n - n| <= L < 1/4,
///  - Avdonin mean condition     block averages of the perturbations < 1/4
///                               for a separated sequence,
///  - sup-norm condition in d dimensions  ||A^T lambda_n - n||_inf <= L
///                               with L < ln2/(pi d).
///
/// All checks operate on finite windows; reports carry the window size and a
/// window_verified qualifier — they never claim anything about the infinite
/// sequence. Thresholds are strict with exact comparison on the computed
/// value: epsilon slack would silently weaken a hypothesis.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "paralattice/errors.hpp"
#include "paralattice/freq_set.hpp"
#include "paralattice/matrix.hpp"

namespace paralattice {

/// A 1-D perturbation gamma_n = n + delta_n of the integers over a
/// contiguous index window n in [n_start, n_start + values.size()).
struct PerturbedSequence {
    long long n_start = 0;
    std::vector<double> values; // gamma_n
    std::vector<double> deltas; // gamma_n - n, kept consistent with values

    static PerturbedSequence from_values(long long n_start, std::vector<double> vals) {
        PerturbedSequence s;
        s.n_start = n_start;
        s.values = std::move(vals);
        s.deltas.resize(s.values.size());
        for (std::size_t i = 0; i < s.values.size(); ++i)
            s.deltas[i] = s.values[i] - static_cast<double>(n_start + static_cast<long long>(i));
        return s;
    }

    static PerturbedSequence from_deltas(long long n_start, std::vector<double> dls) {
        PerturbedSequence s;
        s.n_start = n_start;
        s.deltas = std::move(dls);
        s.values.resize(s.deltas.size());
        for (std::size_t i = 0; i < s.deltas.size(); ++i)
            s.values[i] = static_cast<double>(n_start + static_cast<long long>(i)) + s.deltas[i];
        return s;
    }

    std::int64_t window_size() const { return static_cast<std::int64_t>(values.size()); }
};

/// Result of a condition check. satisfied <=> margin > 0.
struct ConditionReport {
    std::string name;
    bool satisfied = false;
    double margin = 0.0;     // signed distance to the threshold
    double measured = 0.0;   // the L / norm value actually measured
    double threshold = 0.0;
    std::int64_t window = 0; // number of elements inspected
    bool window_verified = true; // finite-window statement, not an infinite claim
};

/// Kadec quarter condition: L = max |delta_n| over the window must satisfy
/// L < 1/4 strictly; margin = 1/4 - L.
inline ConditionReport kadec_condition_check(const PerturbedSequence& s) {
    if (s.values.empty())
        throw OutOfRangeError("kadec_condition_check: empty window");
    ConditionReport rep;
    rep.name = "kadec-quarter";
    double L = 0.0;
    for (double d : s.deltas) L = std::max(L, std::abs(d));
    rep.measured = L;
    rep.threshold = 0.25;
    rep.margin = 0.25 - L;
    rep.satisfied = L < 0.25;
    rep.window = s.window_size();
    return rep;
}

/// Avdonin mean condition over blocks of length P: the sequence must be
/// separated (min gap >= sep_min > 0) and every block mean
/// (1/P)|sum_{k=mP}^{(m+1)P-1} delta_k| must stay below 1/4.
/// The window must consist of whole blocks aligned to multiples of P.
inline ConditionReport avdonin_condition_check(const PerturbedSequence& s, long long P,
                                               double sep_min) {
    if (P < 1)
        throw OutOfRangeError("avdonin_condition_check: P must be >= 1");
    if (s.values.empty())
        throw OutOfRangeError("avdonin_condition_check: empty window");
    if (s.n_start % P != 0 || s.window_size() % P != 0)
        throw IncompleteBlockError(
            "avdonin_condition_check: window [" + std::to_string(s.n_start) + ", " +
            std::to_string(s.n_start + s.window_size()) + ") is not aligned to blocks of length " +
            std::to_string(P));

    ConditionReport rep;
    rep.name = "avdonin-mean-quarter";
    rep.window = s.window_size();
    rep.threshold = 0.25;

    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < s.values.size(); ++i)
        min_gap = std::min(min_gap, std::abs(s.values[i] - s.values[i - 1]));
    // Values are increasing perturbations of consecutive integers, so
    // adjacent elements realize the minimum gap on the window.
    const bool separated = s.values.size() < 2 || min_gap >= sep_min;

    double L = 0.0;
    const std::int64_t blocks = s.window_size() / P;
    for (std::int64_t b = 0; b < blocks; ++b) {
        double sum = 0.0;
        for (long long k = 0; k < P; ++k)
            sum += s.deltas[static_cast<std::size_t>(b * P + k)];
        L = std::max(L, std::abs(sum) / static_cast<double>(P));
    }
    rep.measured = L;
    rep.satisfied = separated && L < 0.25;
    // margin reports the distance to the 1/4 threshold when separation
    // holds; a failed separation is reported as a flat negative margin.
    rep.margin = separated ? 0.25 - L : -1.0;
    return rep;
}

/// d-dimensional sup-norm condition: every constructed point lambda_n must
/// satisfy ||A^T lambda_n - n||_inf <= L with 0 < L < ln2/(pi d).
/// The family must carry its generating indices. margin = L - max deviation.
inline ConditionReport bailey_condition_check(const FreqSet& family, const Mat& a, double L) {
    const int d = family.dim;
    const double cap = std::numbers::ln2 / (std::numbers::pi * d);
    if (!(L > 0.0 && L < cap))
        throw OutOfRangeError("bailey_condition_check: need 0 < L < ln2/(pi d) = " +
                              std::to_string(cap));
    if (!family.has_indices())
        throw OutOfRangeError("bailey_condition_check: family carries no generating indices");
    if (std::abs(det(a)) <= singularity_threshold(a))
        throw SingularError("bailey_condition_check: A is singular");

    const Mat at = a.transposed();
    double max_dev = 0.0;
    for (std::int64_t i = 0; i < family.size(); ++i) {
        const double* lam = family.point(i);
        const long long* n = family.index(i);
        for (int r = 0; r < d; ++r) {
            double acc = 0.0;
            for (int c = 0; c < d; ++c) acc += at.at(r, c) * lam[c];
            max_dev = std::max(max_dev, std::abs(acc - static_cast<double>(n[r])));
        }
    }
    ConditionReport rep;
    rep.name = "sup-norm-perturbation";
    rep.measured = max_dev;
    rep.threshold = L;
    rep.margin = L - max_dev;
    rep.satisfied = max_dev <= L;
    rep.window = family.size();
    return rep;
}

} // namespace paralattice
