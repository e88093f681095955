#pragma once

/// Riesz-bound formulas and transforms:
///  - Kadec bounds (1 -/+ B(L))^2 with B(L) = 1 - cos(pi L) + sin(pi L),
///  - tensor-product bounds (products of per-factor Kadec bounds),
///  - the explicit mean-condition lower-bound constant in log domain,
///  - bound transforms under domain/frequency translation and linear maps.
///
/// The explicit lower-bound constant is astronomically small (its log is a
/// large negative number that can itself approach the double exponent
/// limit), so it is evaluated entirely in log space and never materialized.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "paralattice/errors.hpp"
#include "paralattice/matrix.hpp"

namespace paralattice {

/// Two-sided Riesz bound certificate. log_lower is always meaningful;
/// lower underflows to 0.0 (underflow = true) when exp(log_lower) is
/// subnormal or zero. A negative-infinity log_lower is the sentinel for
/// "below the double exponent range".
struct BoundCert {
    double lower = 0.0;
    double upper = 0.0;
    double log_lower = -std::numeric_limits<double>::infinity();
    bool underflow = false;
    bool has_upper = true; // lower-bound-only certificates omit the upper bound
    std::string source;    // condition tag + parameters
};

/// B(L) = 1 - cos(pi L) + sin(pi L); strictly increasing on [0, 1/4) with
/// B(0) = 0 and B(1/4) = 1.
inline double kadec_B(double L) {
    return 1.0 - std::cos(std::numbers::pi * L) + std::sin(std::numbers::pi * L);
}

/// Kadec bounds ((1-B(L))^2, (1+B(L))^2) for 0 <= L < 1/4. The boundary
/// L = 1/4 is rejected: B(1/4) = 1 makes the lower bound 0, which certifies
/// nothing.
inline std::pair<double, BoundCert> kadec_bounds(double L) {
    if (!(L >= 0.0 && L < 0.25))
        throw OutOfRangeError("kadec_bounds: L must lie in [0, 1/4), got " + std::to_string(L));
    const double B = kadec_B(L);
    BoundCert cert;
    cert.lower = (1.0 - B) * (1.0 - B);
    cert.upper = (1.0 + B) * (1.0 + B);
    cert.log_lower = 2.0 * std::log1p(-B);
    cert.underflow = false;
    cert.source = "kadec-quarter(L=" + std::to_string(L) + ")";
    return {B, cert};
}

/// Tensor-product bounds: prod_k (1-B(L_k))^2 and prod_k (1+B(L_k))^2.
inline BoundCert tensor_bounds(const std::vector<double>& Ls) {
    if (Ls.empty())
        throw OutOfRangeError("tensor_bounds: need at least one factor");
    BoundCert cert;
    cert.lower = 1.0;
    cert.upper = 1.0;
    cert.log_lower = 0.0;
    for (double L : Ls) {
        const auto [B, c] = kadec_bounds(L);
        (void)B;
        cert.lower *= c.lower;
        cert.upper *= c.upper;
        cert.log_lower += c.log_lower;
    }
    cert.underflow = cert.lower == 0.0 || !std::isnormal(cert.lower);
    cert.source = "tensor-kadec(d=" + std::to_string(Ls.size()) + ")";
    return cert;
}

/// Natural log of the explicit lower-bound constant
///   A(Bp, delta, L, P) = exp(-20 pi^2 (2Bt)^{2Pt} / Pt^2) * (dt/(9Bt))^{240 (2Bt)^{Pt}}
/// with Pt = P * ceil((1/P) * 2(4Bp+2)^2 / (1/4 - L)),
///      Bt = 3/2 + 2(3Bp+1),  dt = (1/4 - L) * delta / 2.
///
/// Both terms of log A are negative; their magnitudes are combined by
/// log-sum-exp so nothing overflows en route. When even |log A| exceeds
/// DBL_MAX the -inf sentinel is returned (never NaN): at that point the
/// bound certifies nothing representable anyway.
inline double lindner_log_lower_bound(double Bp, double delta, double L, long long P) {
    if (!(Bp >= 0.0))
        throw OutOfRangeError("lindner_log_lower_bound: Bp must be >= 0");
    if (!(delta > 0.0))
        throw OutOfRangeError("lindner_log_lower_bound: delta must be > 0");
    if (!(L >= 0.0 && L < 0.25))
        throw OutOfRangeError("lindner_log_lower_bound: L must lie in [0, 1/4)");
    if (P < 1)
        throw OutOfRangeError("lindner_log_lower_bound: P must be >= 1");

    const double Bt = 1.5 + 2.0 * (3.0 * Bp + 1.0);
    const double quarter_gap = 0.25 - L;
    const double Pt = static_cast<double>(P) *
                      std::ceil(2.0 * (4.0 * Bp + 2.0) * (4.0 * Bp + 2.0) /
                                (quarter_gap * static_cast<double>(P)));
    const double dt = 0.5 * quarter_gap * delta;
    if (!(dt < 9.0 * Bt))
        throw OutOfRangeError("lindner_log_lower_bound: requires dt < 9*Bt");

    const double log_2Bt = std::log(2.0 * Bt);
    // |term1| = 20 pi^2 (2Bt)^{2Pt} / Pt^2
    const double l1 = std::log(20.0 * std::numbers::pi * std::numbers::pi) +
                      2.0 * Pt * log_2Bt - 2.0 * std::log(Pt);
    // |term2| = 240 (2Bt)^{Pt} * ln(9Bt/dt)
    const double l2 = std::log(240.0) + Pt * log_2Bt + std::log(std::log(9.0 * Bt / dt));
    const double hi = std::max(l1, l2);
    const double lo = std::min(l1, l2);
    const double lse = hi + std::log1p(std::exp(lo - hi));
    if (lse > std::log(std::numeric_limits<double>::max()))
        return -std::numeric_limits<double>::infinity();
    return -std::exp(lse);
}

/// BoundCert wrapper for the explicit lower-bound constant (no upper bound).
inline BoundCert lindner_cert(double Bp, double delta, double L, long long P) {
    BoundCert cert;
    cert.log_lower = lindner_log_lower_bound(Bp, delta, L, P);
    cert.lower = 0.0; // exp(log_lower) underflows for every admissible input
    cert.underflow = true;
    cert.has_upper = false;
    cert.upper = 0.0;
    cert.source = "mean-condition-explicit(Bp=" + std::to_string(Bp) +
                  ",delta=" + std::to_string(delta) + ",L=" + std::to_string(L) +
                  ",P=" + std::to_string(P) + ")";
    return cert;
}

enum class BoundTransform { TranslateDomain, TranslateFrequency, LinearMap };

/// Transform Riesz bounds under basic operations: translations leave bounds
/// unchanged; a linear map A on the domain divides both bounds by |det A|.
inline BoundCert transform_bounds(const BoundCert& cert, BoundTransform op,
                                  const Mat* a = nullptr) {
    BoundCert out = cert;
    switch (op) {
        case BoundTransform::TranslateDomain:
            out.source = cert.source + " | translate-domain";
            return out;
        case BoundTransform::TranslateFrequency:
            out.source = cert.source + " | translate-frequency";
            return out;
        case BoundTransform::LinearMap: {
            if (a == nullptr)
                throw OutOfRangeError("transform_bounds: linear-map requires a matrix");
            const double dt = std::abs(det(*a));
            if (dt <= singularity_threshold(*a))
                throw SingularError("transform_bounds: linear-map matrix is singular");
            out.lower = cert.lower / dt;
            out.upper = cert.upper / dt;
            out.log_lower = cert.log_lower - std::log(dt); // -inf stays -inf
            out.underflow = out.lower == 0.0 || !std::isnormal(out.lower);
            out.source = cert.source + " | linear-map(det=" + std::to_string(dt) + ")";
            return out;
        }
    }
    throw OutOfRangeError("transform_bounds: unknown transform");
}

} // namespace paralattice
