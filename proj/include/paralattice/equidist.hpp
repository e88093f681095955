#pragma once

/// Block equidistribution diagnostics for the fractional parts
/// frac((k + β)/α). For irrational 1/α the block means over
/// k in [mP, (m+1)P) approach 1/2 as P grows; the check reports the worst
/// deviation over a range of blocks and offsets β.

#include <cmath>
#include <cstdint>
#include <vector>

#include "paralattice/errors.hpp"

namespace paralattice {

struct EquidistReport {
    long long block_length = 0;   ///< P
    double max_deviation = 0.0;   ///< worst |block mean - 1/2| seen
    double epsilon = 0.0;         ///< acceptance threshold
    bool satisfied = false;       ///< max_deviation < epsilon
};

/// Checks every block m in [m_lo, m_hi] for every offset in `betas`.
inline EquidistReport equidistribution_check(double alpha, const std::vector<double>& betas,
                                             long long block_length, long long m_lo, long long m_hi,
                                             double epsilon) {
    if (!(alpha > 0.0)) throw BadAlphaError("equidistribution_check: alpha must be positive");
    if (block_length < 1) throw OutOfRangeError("equidistribution_check: block length must be >= 1");
    if (m_hi < m_lo) throw OutOfRangeError("equidistribution_check: empty block range");
    if (betas.empty()) throw OutOfRangeError("equidistribution_check: no offsets");

    EquidistReport rep;
    rep.block_length = block_length;
    rep.epsilon = epsilon;
    for (double beta : betas) {
        for (long long m = m_lo; m <= m_hi; ++m) {
            double sum = 0.0;
            for (long long k = m * block_length; k < (m + 1) * block_length; ++k) {
                const double x = (static_cast<double>(k) + beta) / alpha;
                sum += x - std::floor(x);
            }
            const double dev = std::abs(sum / static_cast<double>(block_length) - 0.5);
            rep.max_deviation = std::max(rep.max_deviation, dev);
        }
    }
    rep.satisfied = rep.max_deviation < epsilon;
    return rep;
}

} // namespace paralattice
