#pragma once

/// JSON serializers for every report struct. The key order here is the
/// byte-level report contract: identical configs must produce identical
/// report files.

#include <cmath>
#include <string>

#include "paralattice/bounds.hpp"
#include "paralattice/conditions.hpp"
#include "paralattice/equidist.hpp"
#include "paralattice/freq_set.hpp"
#include "paralattice/gram.hpp"
#include "paralattice/json_writer.hpp"
#include "paralattice/ladder.hpp"
#include "paralattice/lattice.hpp"
#include "paralattice/matrix.hpp"
#include "paralattice/witness.hpp"

namespace paralattice {

inline JsonValue json_from_mat(const Mat& m) {
    JsonValue rows = JsonValue::array();
    for (int i = 0; i < m.n; ++i) {
        JsonValue row = JsonValue::array();
        for (int j = 0; j < m.n; ++j) row.push(m.at(i, j));
        rows.push(std::move(row));
    }
    return rows;
}

inline JsonValue json_from_condition(const ConditionReport& c) {
    JsonValue o = JsonValue::object();
    o.set("name", c.name);
    o.set("satisfied", c.satisfied);
    o.set("measured", c.measured);
    o.set("threshold", c.threshold);
    o.set("margin", c.margin);
    o.set("window", static_cast<long long>(c.window));
    o.set("window_verified", c.window_verified);
    return o;
}

inline JsonValue json_from_bound_cert(const BoundCert& b) {
    JsonValue o = JsonValue::object();
    o.set("source", b.source);
    o.set("lower", b.lower);
    if (b.has_upper) o.set("upper", b.upper);
    // -inf (and any non-finite value) serializes as null: "below the
    // double exponent range".
    o.set("log_lower", b.log_lower);
    o.set("underflow", b.underflow);
    return o;
}

inline JsonValue json_from_witness(const Witness& w) {
    JsonValue o = JsonValue::object();
    o.set("R", json_from_mat(w.R));
    o.set("H", json_from_mat(w.H));
    JsonValue p = JsonValue::array();
    for (int i : w.P) p.push(i);
    o.set("P", std::move(p));
    o.set("mode", witness_mode_name(w.mode));
    return o;
}

inline JsonValue json_from_witness_report(const WitnessReport& r) {
    JsonValue o = JsonValue::object();
    o.set("accepted", r.accepted);
    JsonValue f = JsonValue::array();
    for (const std::string& s : r.failures) f.push(s);
    o.set("failures", std::move(f));
    o.set("residual", r.residual);
    return o;
}

/// Frequency-set JSON. Integer-valued sets emit points as JSON integers.
/// Above `point_cap` points the coordinate list is omitted (points: null)
/// to keep reports readable; the count is always present.
inline JsonValue json_from_freq_set(const FreqSet& s, std::int64_t point_cap = 10000) {
    JsonValue o = JsonValue::object();
    o.set("dim", s.dim);
    o.set("provenance", provenance_name(s.provenance));
    o.set("index_radius", s.index_radius);
    o.set("size", static_cast<long long>(s.size()));
    if (s.size() > point_cap) {
        o.set("points", JsonValue());
        o.set("points_omitted", true);
        return o;
    }
    JsonValue pts = JsonValue::array();
    for (std::int64_t i = 0; i < s.size(); ++i) {
        JsonValue p = JsonValue::array();
        for (int k = 0; k < s.dim; ++k) {
            const double x = s.point(i)[k];
            if (s.integral)
                p.push(static_cast<long long>(std::llround(x)));
            else
                p.push(x);
        }
        pts.push(std::move(p));
    }
    o.set("points", std::move(pts));
    return o;
}

inline JsonValue json_from_orthogonality(const OrthogonalityReport& r) {
    JsonValue o = JsonValue::object();
    o.set("orthogonal", r.orthogonal);
    o.set("max_offdiag_rel", r.max_offdiag);
    o.set("max_diag_dev_rel", r.max_diag_dev);
    o.set("tolerance", r.tolerance);
    o.set("pairs", static_cast<long long>(r.pairs));
    return o;
}

inline JsonValue json_from_ladder(const GramLadderReport& g) {
    JsonValue o = JsonValue::object();
    o.set("radii", json_from_list(g.radii));
    JsonValue sizes = JsonValue::array();
    for (std::int64_t s : g.sizes) sizes.push(static_cast<long long>(s));
    o.set("sizes", std::move(sizes));
    JsonValue methods = JsonValue::array();
    for (const std::string& m : g.method) methods.push(m);
    o.set("method", std::move(methods));
    o.set("eig_min", json_from_list(g.eig_min));
    o.set("eig_max", json_from_list(g.eig_max));
    o.set("normalized", g.normalized);
    o.set("det_abs", g.det_abs);
    o.set("monotone", g.monotone);
    o.set("numerical_failure", g.numerical_failure);
    o.set("stabilized", g.stabilized);
    o.set("orientation", GramLadderReport::kOrientation);
    return o;
}

inline JsonValue json_from_density(const DensityReport& d) {
    JsonValue o = JsonValue::object();
    o.set("window_radii", json_from_list(d.window_radii));
    JsonValue counts = JsonValue::array();
    for (std::int64_t c : d.counts) counts.push(static_cast<long long>(c));
    o.set("counts", std::move(counts));
    o.set("estimates", json_from_list(d.estimates));
    o.set("extrapolated", d.extrapolated);
    return o;
}

inline JsonValue json_from_equidist(const EquidistReport& e) {
    JsonValue o = JsonValue::object();
    o.set("P", static_cast<long long>(e.block_length));
    o.set("max_deviation", e.max_deviation);
    o.set("epsilon", e.epsilon);
    o.set("satisfied", e.satisfied);
    return o;
}

} // namespace paralattice
