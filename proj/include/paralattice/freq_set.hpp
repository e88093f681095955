#pragma once

/// FreqSet: a finite truncated frequency set with generator provenance.
///
/// Points are stored in a flat row-major buffer (point i occupies
/// [i*dim, (i+1)*dim)). Integer-valued sets keep the `integral` flag; their
/// coordinates are exact (|v| < 2^53) and serialize as JSON integers.
/// Sets produced by index-box enumeration also carry their generating index
/// vectors, which later stages use for membership checks and fast Gram paths.

#include <cstdint>
#include <string>
#include <vector>

#include "paralattice/errors.hpp"
#include "paralattice/matrix.hpp"

namespace paralattice {

/// Generating rule of a frequency set.
enum class Provenance {
    RoundedDual,   // r(H^{-T} Z^d), H lower triangular with diagonals in (0,1]
    Rectangular,   // r(1/a_11 Z + d_1) x ... x r(1/a_dd Z + d_d)
    Lifted,        // B R^T C
    SpectralNorm,  // r(A^{-T} Z^d) under the spectral-norm admissibility bound
    Tensor,        // cartesian product of 1-D sets
    Explicit,      // direct enumeration (lattices, Beatty sequences, user data)
};

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::RoundedDual: return "rounded-dual";
        case Provenance::Rectangular: return "rectangular";
        case Provenance::Lifted: return "lifted";
        case Provenance::SpectralNorm: return "spectral-norm";
        case Provenance::Tensor: return "tensor";
        case Provenance::Explicit: return "explicit";
    }
    return "explicit";
}

struct FreqSet {
    int dim = 0;
    Provenance provenance = Provenance::Explicit;
    /// Truncation of the generating index set: |n_k| <= index_radius.
    int index_radius = 0;
    /// True when every coordinate is an integer (stored exactly).
    bool integral = false;
    /// Flat row-major coordinates, size() * dim entries.
    std::vector<double> pts;
    /// Generating index vectors (same layout), empty when not applicable.
    std::vector<long long> idx;

    /// Set when points are exactly M * index (a pure lattice, no rounding);
    /// enables difference-based Gram fast paths.
    bool lattice_structure = false;
    Mat generator; // meaningful only when lattice_structure is true

    std::int64_t size() const {
        return dim == 0 ? 0 : static_cast<std::int64_t>(pts.size()) / dim;
    }

    const double* point(std::int64_t i) const { return pts.data() + i * dim; }
    const long long* index(std::int64_t i) const {
        return idx.empty() ? nullptr : idx.data() + i * dim;
    }
    bool has_indices() const { return !idx.empty(); }

    void push_point(const double* x) { pts.insert(pts.end(), x, x + dim); }
    void push_index(const long long* n) { idx.insert(idx.end(), n, n + dim); }
};

} // namespace paralattice
