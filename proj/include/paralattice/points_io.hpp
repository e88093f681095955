#pragma once

/// Plot-point emission: CSV rows (x1, ..., xd, series) for external
/// plotting tools. Output is deterministic — rows keep the generating
/// (lexicographic) index order of each series and floats print with 17
/// significant digits.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "paralattice/errors.hpp"
#include "paralattice/freq_set.hpp"
#include "paralattice/matrix.hpp"

namespace paralattice {

struct PointRow {
    std::vector<double> x;
    std::string series; ///< lattice | dual | rounded | vertices
};

/// Corners of A[0,1]^d in mask order: corner(m) = sum of columns k with
/// bit k of m set (so m = 0 is the origin and m = 1 is the first column).
inline std::vector<PointRow> parallelepiped_vertices(const Mat& a) {
    std::vector<PointRow> rows;
    const int d = a.n;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        PointRow r;
        r.series = "vertices";
        r.x.assign(static_cast<std::size_t>(d), 0.0);
        for (int k = 0; k < d; ++k)
            if (mask & (1u << k))
                for (int i = 0; i < d; ++i) r.x[static_cast<std::size_t>(i)] += a.at(i, k);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline void append_series(std::vector<PointRow>& rows, const FreqSet& s, const std::string& name) {
    for (std::int64_t i = 0; i < s.size(); ++i) {
        PointRow r;
        r.series = name;
        r.x.assign(s.point(i), s.point(i) + s.dim);
        rows.push_back(std::move(r));
    }
}

inline void write_points_csv(const std::string& path, int dim, const std::vector<PointRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open points file for writing: " + path);
    for (int k = 0; k < dim; ++k) out << "x" << (k + 1) << ",";
    out << "series\n";
    char buf[32];
    for (const PointRow& r : rows) {
        for (int k = 0; k < dim; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", r.x[static_cast<std::size_t>(k)]);
            out << buf << ",";
        }
        out << r.series << "\n";
    }
    if (!out) throw IoError("write failure on points file: " + path);
}

} // namespace paralattice
