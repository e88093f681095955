#pragma once

/// Command pipeline: resolve the requested construction, run the
/// applicable condition checks and bound formulas, gather numerical
/// evidence (orthogonality window, truncation ladder, density,
/// equidistribution), and assemble the ordered report with a verdict.
///
/// Verdict discipline: "certified-*" only when a theorem's hypotheses all
/// passed; numerics alone yield "evidence-only"; a demonstrably violated
/// hypothesis or a numerical counterexample yields "rejected"; an
/// inconclusive search or failed evidence yields "unknown".

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "paralattice/bounds.hpp"
#include "paralattice/conditions.hpp"
#include "paralattice/config.hpp"
#include "paralattice/constructions.hpp"
#include "paralattice/equidist.hpp"
#include "paralattice/errors.hpp"
#include "paralattice/freq_set.hpp"
#include "paralattice/gram.hpp"
#include "paralattice/json_writer.hpp"
#include "paralattice/ladder.hpp"
#include "paralattice/lattice.hpp"
#include "paralattice/matrix.hpp"
#include "paralattice/points_io.hpp"
#include "paralattice/report.hpp"
#include "paralattice/witness.hpp"

namespace paralattice {

struct ExecResult {
    JsonValue report;
    std::string verdict = "unknown";
    std::string theorem = "none";
    int exit_code = 1;
    std::vector<PointRow> points; ///< plot rows, filled when requested
    int points_dim = 0;
    bool has_points = false;
};

namespace pipe {

inline Mat mat1(double v) {
    Mat m(1);
    m.at(0, 0) = v;
    return m;
}

inline Mat diag_mat(const std::vector<double>& d) {
    Mat m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n; ++i) m.at(i, i) = d[static_cast<std::size_t>(i)];
    return m;
}

inline int resolve_radius(const ConstructionSpec& c) { return c.has_n ? c.n_radius : 6; }

inline std::vector<int> default_ladder_radii(int dim) {
    if (dim <= 1) return {50, 100, 200};
    if (dim == 2) return {5, 10, 20, 40};
    return {2, 4, 6};
}

inline std::vector<double> default_density_radii(int dim) {
    if (dim <= 1) return {1000.0, 10000.0};
    if (dim == 2) return {50.0, 100.0, 200.0};
    return {10.0, 20.0};
}

inline bool is_positive_integer(double q, double tol) {
    const double r = std::round(q);
    return r >= 0.5 && std::abs(q - r) <= tol * std::max(1.0, std::abs(q));
}

/// Builds the frequency set for a construction spec at the given window
/// radius. Rules that carry their own window (explicit point lists, explicit
/// Beatty ranges) ignore `radius`.
inline FreqSet build_set(const RunConfig& rc, const ConstructionSpec& c, int radius) {
    if (c.rule == "rounded-dual") {
        if (c.has_h) return rounded_dual_construction(c.h, radius);
        if (rc.has_a) return rounded_dual_construction(rc.a, radius);
        throw ConfigError("construction.H", "rounded-dual needs H (or a top-level A)");
    }
    if (c.rule == "dual-lattice") {
        if (!rc.has_a) throw ConfigError("A", "dual-lattice needs the domain matrix A");
        return lattice_points(inv_transpose(rc.a), radius);
    }
    if (c.rule == "lattice") {
        if (!c.has_m) throw ConfigError("construction.M", "lattice rule needs the generator M");
        return lattice_points(c.m, radius);
    }
    if (c.rule == "rectangular") {
        if (c.diagonal.empty())
            throw ConfigError("construction.diagonal", "rectangular rule needs diagonal entries");
        return rectangular_construction(c.diagonal, c.offsets, radius);
    }
    if (c.rule == "lifted") {
        if (!c.has_h) throw ConfigError("construction.H", "lifted rule needs the base H");
        if (!c.has_r) throw ConfigError("construction.R", "lifted rule needs the integer matrix R");
        const FreqSet base = rounded_dual_construction(c.h, radius);
        const Mat b = rc.has_b ? rc.b : Mat::identity(base.dim);
        return lift_frequencies(base, c.r, b);
    }
    if (c.rule == "spectral-norm") {
        if (!rc.has_a) throw ConfigError("A", "spectral-norm rule needs the domain matrix A");
        return spectral_norm_construction(rc.a, radius);
    }
    if (c.rule == "tensor") {
        if (c.factors.empty())
            throw ConfigError("construction.factors", "tensor rule needs 1-D factors");
        std::vector<FreqSet> parts;
        parts.reserve(c.factors.size());
        for (const ConstructionSpec& f : c.factors)
            parts.push_back(build_set(rc, f, f.has_n ? f.n_radius : radius));
        return tensor_product(parts);
    }
    if (c.rule == "beatty") {
        if (!c.has_alpha) throw ConfigError("construction.alpha", "beatty rule needs alpha");
        const long long lo = c.has_k_range ? c.k_min : -static_cast<long long>(radius);
        const long long hi = c.has_k_range ? c.k_max : static_cast<long long>(radius);
        return beatty_fraenkel(c.alpha, c.beta, lo, hi);
    }
    if (c.rule == "explicit") {
        if (c.points.empty()) throw ConfigError("construction.points", "explicit rule needs points");
        FreqSet s;
        s.dim = c.points_dim;
        s.provenance = Provenance::Explicit;
        s.pts = c.points;
        bool integral = true;
        for (double x : c.points) integral = integral && x == std::nearbyint(x);
        s.integral = integral;
        return s;
    }
    if (c.rule == "perturbed-1d") {
        if (c.deltas.empty() == c.values.empty())
            throw ConfigError("construction", "perturbed-1d needs exactly one of deltas/values");
        const PerturbedSequence seq = c.values.empty()
                                          ? PerturbedSequence::from_deltas(c.n_start, c.deltas)
                                          : PerturbedSequence::from_values(c.n_start, c.values);
        FreqSet s;
        s.dim = 1;
        s.provenance = Provenance::Explicit;
        bool integral = true;
        for (std::size_t i = 0; i < seq.values.size(); ++i) {
            s.pts.push_back(seq.values[i]);
            s.idx.push_back(seq.n_start + static_cast<long long>(i));
            integral = integral && seq.values[i] == std::nearbyint(seq.values[i]);
        }
        s.integral = integral;
        long long rad = 0;
        for (long long n : s.idx) rad = std::max(rad, std::llabs(n));
        s.index_radius = static_cast<int>(rad);
        return s;
    }
    throw ConfigError("construction.rule", "unknown rule \"" + c.rule + "\"");
}

/// True when rebuilding the rule at a different radius yields the natural
/// truncation (the usual case); fixed-window rules are truncated by
/// filtering instead.
inline bool rule_rebuildable(const ConstructionSpec& c) {
    if (c.rule == "explicit" || c.rule == "perturbed-1d") return false;
    if (c.rule == "beatty" && c.has_k_range) return false;
    return true;
}

/// Keeps the points whose generating index (or, lacking indices, whose
/// coordinates) lie in [-N, N]^d.
inline FreqSet filter_by_radius(const FreqSet& full, int N) {
    FreqSet out;
    out.dim = full.dim;
    out.provenance = full.provenance;
    out.index_radius = N;
    out.integral = full.integral;
    for (std::int64_t i = 0; i < full.size(); ++i) {
        bool keep = true;
        if (full.has_indices()) {
            for (int k = 0; k < full.dim; ++k)
                keep = keep && std::llabs(full.index(i)[k]) <= static_cast<long long>(N);
        } else {
            for (int k = 0; k < full.dim; ++k) keep = keep && std::abs(full.point(i)[k]) <= N;
        }
        if (!keep) continue;
        out.push_point(full.point(i));
        if (full.has_indices()) out.push_index(full.index(i));
    }
    return out;
}

/// Ladder truncation rule for a construction.
inline std::function<FreqSet(int)> ladder_truncator(const RunConfig& rc, const ConstructionSpec& c) {
    if (rule_rebuildable(c)) {
        const RunConfig* rcp = &rc; // execute() keeps rc alive across the ladder
        const ConstructionSpec spec = c;
        return [rcp, spec](int n) { return build_set(*rcp, spec, n); };
    }
    FreqSet full = build_set(rc, c, resolve_radius(c));
    return [full = std::move(full)](int n) { return filter_by_radius(full, n); };
}

/// Ladder radii clipped to the native window of fixed-window rules.
inline std::vector<int> clip_radii(const std::vector<int>& want, int native) {
    std::vector<int> out;
    for (int r : want) {
        const int rr = std::min(r, native);
        if (out.empty() || rr > out.back()) out.push_back(rr);
    }
    return out;
}

/// Density counter for a construction; `window_limited` marks counters
/// that can only see a fixed point list (estimates are then valid only
/// well inside the construction window).
inline PointCounter make_density_counter(const RunConfig& rc, const ConstructionSpec& c,
                                         bool& window_limited) {
    window_limited = false;
    if (c.rule == "rounded-dual") {
        const Mat h = c.has_h ? c.h : rc.a;
        return make_rounded_lattice_counter(inv_transpose(h));
    }
    if (c.rule == "dual-lattice") return make_lattice_counter(inv_transpose(rc.a));
    if (c.rule == "lattice") return make_lattice_counter(c.m);
    if (c.rule == "spectral-norm") return make_rounded_lattice_counter(inv_transpose(rc.a));
    if (c.rule == "beatty") return make_beatty_counter(c.alpha, c.beta);
    if (c.rule == "rectangular") {
        const std::vector<double> diag = c.diagonal;
        const std::vector<double> offs = c.offsets;
        return [diag, offs](double r) -> std::int64_t {
            std::int64_t total = 1;
            for (std::size_t k = 0; k < diag.size(); ++k) {
                const double step = 1.0 / diag[k];
                const double off = offs.empty() ? 0.0 : offs[k];
                const auto n_max = static_cast<long long>((r + 0.5 + std::abs(off)) / step) + 2;
                std::int64_t cnt = 0;
                for (long long n = -n_max; n <= n_max; ++n) {
                    const long long v = round_half_up(step * static_cast<double>(n) + off);
                    if (std::llabs(v) <= static_cast<long long>(r)) ++cnt;
                }
                total *= cnt;
            }
            return total;
        };
    }
    if (c.rule == "tensor") {
        std::vector<PointCounter> parts;
        for (const ConstructionSpec& f : c.factors) {
            bool sub_limited = false;
            parts.push_back(make_density_counter(rc, f, sub_limited));
            window_limited = window_limited || sub_limited;
        }
        return [parts](double r) -> std::int64_t {
            std::int64_t total = 1;
            for (const PointCounter& p : parts) total *= p(r);
            return total;
        };
    }
    if (c.rule == "lifted" && c.has_h) {
        // When B R^T is the identity the lift is a no-op and the exact
        // rounded-dual counter applies at every radius.
        const Mat brt = (rc.has_b ? rc.b : Mat::identity(c.h.n)) * c.r.transposed();
        Mat dev = brt;
        for (int i = 0; i < dev.n; ++i) dev.at(i, i) -= 1.0;
        if (dev.max_abs_entry() < 1e-12) return make_rounded_lattice_counter(inv_transpose(c.h));
    }
    // lifted (general) / explicit / perturbed-1d: count within the stored window.
    window_limited = true;
    FreqSet full = build_set(rc, c, resolve_radius(c));
    return make_set_counter(full);
}

/// gamma_k = alpha * x_k viewed as a perturbation of Z (the L^2[0,alpha]
/// system rescaled to the unit interval).
inline PerturbedSequence beatty_sequence(const FreqSet& s, double alpha) {
    PerturbedSequence seq;
    seq.n_start = s.idx.front();
    std::vector<double> vals(static_cast<std::size_t>(s.size()));
    for (std::int64_t i = 0; i < s.size(); ++i)
        vals[static_cast<std::size_t>(i)] = alpha * s.point(i)[0];
    return PerturbedSequence::from_values(seq.n_start, std::move(vals));
}

inline double delta_mean(const PerturbedSequence& s) {
    return std::accumulate(s.deltas.begin(), s.deltas.end(), 0.0) /
           static_cast<double>(s.deltas.size());
}

inline PerturbedSequence center_deltas(const PerturbedSequence& s, double c) {
    std::vector<double> d = s.deltas;
    for (double& x : d) x -= c;
    return PerturbedSequence::from_deltas(s.n_start, std::move(d));
}

/// Largest sub-window aligned to whole blocks of length P; false when no
/// full block fits.
inline bool trim_to_blocks(const PerturbedSequence& s, long long P, PerturbedSequence& out) {
    long long start = s.n_start;
    const long long rem = ((start % P) + P) % P;
    if (rem != 0) start += P - rem;
    const long long endi = s.n_start + static_cast<long long>(s.values.size());
    long long len = endi - start;
    if (len < P) return false;
    len -= len % P;
    const auto off = static_cast<std::size_t>(start - s.n_start);
    std::vector<double> vals(s.values.begin() + static_cast<std::ptrdiff_t>(off),
                             s.values.begin() + static_cast<std::ptrdiff_t>(off + static_cast<std::size_t>(len)));
    out = PerturbedSequence::from_values(start, std::move(vals));
    return true;
}

inline double min_adjacent_gap(const PerturbedSequence& s) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < s.values.size(); ++i)
        g = std::min(g, std::abs(s.values[i] - s.values[i - 1]));
    return g;
}

/// Maps hypothesis-violation errors to "rejected" and incidental/numeric
/// failures to "unknown".
inline std::string error_verdict(const Error& e) {
    if (dynamic_cast<const DuplicateAfterRoundingError*>(&e) != nullptr ||
        dynamic_cast<const NormTooLargeError*>(&e) != nullptr ||
        dynamic_cast<const BadDiagonalError*>(&e) != nullptr ||
        dynamic_cast<const BadStructureError*>(&e) != nullptr ||
        dynamic_cast<const BadAlphaError*>(&e) != nullptr)
        return "rejected";
    return "unknown";
}

} // namespace pipe

inline ExecResult execute(const RunConfig& rc) {
    ExecResult res;
    JsonValue conditions = JsonValue::array();
    JsonValue bounds = JsonValue::array();
    JsonValue notes = JsonValue::array();
    JsonValue witness_json, witness_report_json, freq_json, orth_json, gram_json, density_json,
        equidist_json, points_json;
    std::string verdict = "evidence-only";
    std::string theorem = "none";

    const auto note = [&notes](const std::string& s) { notes.push(s); };

    // Resolved construction: certify/verify/construct default to the
    // rounded-dual rule on A when none is given.
    ConstructionSpec cons;
    if (rc.has_construction) {
        cons = rc.construction;
    } else {
        cons.rule = "rounded-dual";
    }
    const int radius = pipe::resolve_radius(cons);

    // Domain matrix A for Gram/density purposes.
    Mat domain = Mat::identity(1);
    bool has_domain = rc.has_a;
    if (rc.has_a) {
        domain = rc.a;
    } else if (cons.rule == "beatty" && cons.has_alpha) {
        domain = pipe::mat1(cons.alpha);
        has_domain = true;
    } else if (cons.rule == "rectangular" && !cons.diagonal.empty()) {
        domain = pipe::diag_mat(cons.diagonal);
        has_domain = true;
    } else if (cons.rule == "tensor" && !cons.factors.empty()) {
        std::vector<double> d;
        bool ok = true;
        for (const ConstructionSpec& f : cons.factors) {
            if (f.rule == "beatty" && f.has_alpha)
                d.push_back(f.alpha);
            else if (f.rule == "perturbed-1d")
                d.push_back(1.0);
            else
                ok = false;
        }
        if (ok) {
            domain = pipe::diag_mat(d);
            has_domain = true;
        }
    } else if (cons.rule == "perturbed-1d" || cons.rule == "explicit") {
        domain = Mat::identity(cons.rule == "explicit" ? std::max(cons.points_dim, 1) : 1);
        has_domain = true;
    }
    const Mat bmat = rc.has_b ? rc.b : Mat::identity(domain.n);

    FreqSet built;
    bool has_built = false;

    // Numerical evidence shared by construct/verify/certify.
    OrthogonalityReport last_orth;
    bool has_orth = false;
    const auto run_evidence = [&](bool want_orth) {
        if (want_orth && has_built && has_domain) {
            last_orth = orthogonality_report(domain, built, rc.tol.orthogonality);
            has_orth = true;
            orth_json = json_from_orthogonality(last_orth);
        }
        if (rc.run_ladder && has_domain) {
            std::vector<int> radii = rc.ladder_radii.empty() ? pipe::default_ladder_radii(domain.n)
                                                             : rc.ladder_radii;
            if (!pipe::rule_rebuildable(cons)) {
                int native = radius;
                if (cons.rule == "beatty" && cons.has_k_range)
                    native = static_cast<int>(std::max(std::llabs(cons.k_min), std::llabs(cons.k_max)));
                else if (has_built)
                    native = built.index_radius;
                radii = pipe::clip_radii(radii, native);
            }
            const GramLadderReport lad = truncation_ladder(domain, pipe::ladder_truncator(rc, cons), radii);
            gram_json = json_from_ladder(lad);
            if (lad.numerical_failure)
                note("ladder interlacing violated beyond slack; eigenvalues unreliable");
            if (!lad.eig_min.empty() && lad.eig_min.back() < 1e-6) {
                note("ladder floor below 1e-6 at the largest radius");
                if (verdict == "evidence-only") verdict = "unknown";
            }
        }
        if (rc.run_density && has_domain) {
            bool limited = false;
            const PointCounter counter = pipe::make_density_counter(rc, cons, limited);
            std::vector<double> radii;
            if (rc.density_radii.empty())
                radii = pipe::default_density_radii(domain.n);
            else
                for (int r : rc.density_radii) radii.push_back(static_cast<double>(r));
            density_json = json_from_density(density_estimate(domain.n, counter, radii));
            if (limited)
                note("density counted a fixed point window; trust only radii well inside it");
        }
    };

    const auto build = [&]() {
        built = pipe::build_set(rc, cons, radius);
        has_built = true;
        freq_json = json_from_freq_set(built);
    };

    // The 1-D condition/bound flow shared by beatty and perturbed-1d.
    // Returns true when some theorem certified the family.
    const auto one_dim_flow = [&](const PerturbedSequence& raw) -> bool {
        const double center = pipe::delta_mean(raw);
        const PerturbedSequence seq = pipe::center_deltas(raw, center);
        note("deltas centered by " + std::to_string(center) +
             " (a frequency translation; bounds are unchanged)");

        const ConditionReport kad = kadec_condition_check(seq);
        conditions.push(json_from_condition(kad));
        if (kad.satisfied) {
            bounds.push(json_from_bound_cert(kadec_bounds(kad.measured).second));
            theorem = "kadec-quarter";
            verdict = "certified-riesz-by-theorem";
            return true;
        }

        std::vector<long long> candidates;
        if (cons.block_len > 0) {
            candidates.push_back(cons.block_len);
        } else if (cons.rule == "beatty") {
            for (long long p = 1; p <= 32; ++p) candidates.push_back(p);
        }
        const double sep_min = cons.has_sep_min ? cons.sep_min : 1e-9;
        for (long long p : candidates) {
            PerturbedSequence trimmed;
            if (!pipe::trim_to_blocks(seq, p, trimmed)) {
                if (cons.block_len > 0)
                    note("window shorter than one block of length " + std::to_string(p));
                continue;
            }
            ConditionReport avd;
            try {
                avd = avdonin_condition_check(trimmed, p, sep_min);
            } catch (const Error& e) {
                if (cons.block_len > 0) note(std::string("mean condition check failed: ") + e.what());
                continue;
            }
            if (!avd.satisfied && cons.block_len == 0) continue; // keep searching P
            conditions.push(json_from_condition(avd));
            if (trimmed.window_size() < static_cast<std::int64_t>(raw.values.size()))
                note("mean condition evaluated on the aligned sub-window [" +
                     std::to_string(trimmed.n_start) + ", " +
                     std::to_string(trimmed.n_start + trimmed.window_size()) + ") with P = " +
                     std::to_string(p));
            if (cons.block_len == 0)
                note("block length P = " + std::to_string(p) + " found by search");
            if (!avd.satisfied) return false;
            double bp = 0.0;
            for (double dlt : trimmed.deltas) bp = std::max(bp, std::abs(dlt));
            const double gap = pipe::min_adjacent_gap(trimmed);
            try {
                bounds.push(json_from_bound_cert(lindner_cert(bp, gap, avd.measured, p)));
            } catch (const Error& e) {
                note(std::string("no explicit lower-bound certificate: ") + e.what());
            }
            theorem = "avdonin-mean-quarter";
            verdict = "certified-riesz-by-theorem";
            return true;
        }
        if (cons.block_len == 0 && cons.rule == "beatty")
            note("no block length P <= 32 satisfies the mean condition on this window");
        return false;
    };

    try {
        if (rc.command == "bounds") {
            if (!rc.has_bounds_req)
                throw ConfigError("bounds", "bounds command needs a bounds parameter object");
            if (rc.bounds_req.has_kadec)
                bounds.push(json_from_bound_cert(kadec_bounds(rc.bounds_req.kadec_l).second));
            if (rc.bounds_req.has_tensor)
                bounds.push(json_from_bound_cert(tensor_bounds(rc.bounds_req.tensor_ls)));
            if (rc.bounds_req.has_mean)
                bounds.push(json_from_bound_cert(lindner_cert(rc.bounds_req.bp, rc.bounds_req.delta,
                                                              rc.bounds_req.mean_l,
                                                              rc.bounds_req.mean_p)));
            verdict = "evidence-only"; // formulas evaluated, nothing certified about a set
        } else if (rc.command == "decompose") {
            if (!rc.has_a) throw ConfigError("A", "decompose needs the domain matrix A");
            const WitnessMode mode =
                rc.mode == "orthogonal" ? WitnessMode::Orthogonal : WitnessMode::Riesz;
            if (rc.has_witness) {
                const WitnessReport wr = check_witness(rc.a, bmat, rc.witness, rc.tol.witness);
                witness_json = json_from_witness(rc.witness);
                witness_report_json = json_from_witness_report(wr);
                verdict = wr.accepted ? "evidence-only" : "rejected";
            } else {
                Witness w;
                if (find_witness_heuristic(rc.a, bmat, mode, w, rc.tol.witness)) {
                    witness_json = json_from_witness(w);
                    witness_report_json =
                        json_from_witness_report(check_witness(rc.a, bmat, w, rc.tol.witness));
                    verdict = "evidence-only";
                } else {
                    note("restricted search (R = I, column permutations) found no decomposition; "
                         "existence is undecided, not disproved");
                    verdict = "unknown";
                }
            }
        } else if (rc.command == "emit-points") {
            if (!rc.has_a && !rc.has_construction)
                throw ConfigError("A", "emit-points needs A or a construction");
            const std::vector<std::string> series =
                rc.series.empty() ? std::vector<std::string>{"dual", "rounded"} : rc.series;
            res.points_dim = rc.has_a ? rc.a.n : pipe::build_set(rc, cons, radius).dim;
            JsonValue emitted = JsonValue::object();
            for (const std::string& s : series) {
                std::size_t before = res.points.size();
                if (s == "lattice") {
                    if (!rc.has_a) throw ConfigError("A", "lattice series needs A");
                    append_series(res.points, lattice_points(rc.has_b ? rc.b : Mat::identity(rc.a.n), radius),
                                  "lattice");
                } else if (s == "dual") {
                    if (!rc.has_a) throw ConfigError("A", "dual series needs A");
                    append_series(res.points, lattice_points(inv_transpose(rc.a), radius), "dual");
                } else if (s == "rounded") {
                    if (rc.has_construction)
                        append_series(res.points, pipe::build_set(rc, cons, radius), "rounded");
                    else if (rc.has_a)
                        append_series(res.points, rounded_lattice(inv_transpose(rc.a), radius),
                                      "rounded");
                    else
                        throw ConfigError("A", "rounded series needs A or a construction");
                } else if (s == "vertices") {
                    if (!rc.has_a) throw ConfigError("A", "vertices series needs A");
                    auto v = parallelepiped_vertices(rc.a);
                    res.points.insert(res.points.end(), v.begin(), v.end());
                }
                emitted.set(s, static_cast<long long>(res.points.size() - before));
            }
            res.has_points = true;
            points_json = std::move(emitted);
            verdict = "evidence-only";
        } else if (rc.command == "construct") {
            build();
            verdict = "evidence-only";
        } else if (rc.command == "verify") {
            if (!rc.has_construction)
                throw ConfigError("construction", "verify needs a construction to test");
            build();
            const bool orth_mode = rc.mode == "orthogonal" || cons.rule == "dual-lattice" ||
                                   cons.rule == "lattice";
            run_evidence(orth_mode);
            if (orth_mode && has_orth && !last_orth.orthogonal) {
                note("orthogonality window test found a violating pair: a counterexample, "
                     "not merely missing evidence");
                verdict = "rejected";
            }
        } else if (rc.command == "certify") {
            if (cons.rule == "dual-lattice" || cons.rule == "lattice") {
                build();
                // E(M Z^d) orthogonal basis of A[0,1]^d <=> A^T M unimodular integer.
                const Mat q = domain.transposed() * built.generator;
                const MatClass qc = classify_matrix(q, rc.tol.witness);
                const double qdet = std::abs(det(q));
                run_evidence(true);
                if (qc.is_integer && std::abs(qdet - 1.0) <= rc.tol.witness) {
                    theorem = "dual-lattice-orthogonality";
                    verdict = "certified-orthogonal";
                    BoundCert exact;
                    exact.lower = 1.0;
                    exact.upper = 1.0;
                    exact.log_lower = 0.0;
                    exact.source = "orthogonal-basis(normalized)";
                    bounds.push(json_from_bound_cert(exact));
                } else if (qc.is_integer) {
                    note("A^T M is integer with |det| = " + std::to_string(qdet) +
                         " != 1: orthogonal but incomplete (density deficit)");
                    verdict = "rejected";
                    theorem = "volume-integrality";
                } else {
                    note("A^T M is not an integer matrix; no lattice-orthogonality theorem applies");
                    verdict = "evidence-only";
                }
            } else if (cons.rule == "spectral-norm") {
                const double measured = spectral_norm(rc.has_a ? rc.a : domain);
                const double threshold = spectral_norm_threshold(domain.n);
                ConditionReport thr;
                thr.name = "spectral-norm-threshold";
                thr.satisfied = measured < threshold;
                thr.measured = measured;
                thr.threshold = threshold;
                thr.margin = threshold - measured;
                thr.window = 0;
                conditions.push(json_from_condition(thr));
                if (!thr.satisfied)
                    throw NormTooLargeError(measured, threshold,
                                            "certify: ||A||_2 = " + std::to_string(measured) +
                                                " >= threshold " + std::to_string(threshold));
                build();
                const double sup_l = measured * std::sqrt(static_cast<double>(domain.n)) / 2.0;
                const ConditionReport bailey = bailey_condition_check(built, domain, sup_l);
                conditions.push(json_from_condition(bailey));
                run_evidence(false);
                if (bailey.satisfied) {
                    theorem = "spectral-norm-rounding";
                    verdict = "certified-riesz-by-theorem";
                } else {
                    note("rounding moved a point beyond the sup-norm cap; this contradicts the "
                         "construction and indicates a numerical fault");
                    verdict = "rejected";
                }
            } else if (cons.rule == "beatty") {
                build();
                const bool certified = one_dim_flow(pipe::beatty_sequence(built, cons.alpha));
                run_evidence(false);
                if (!certified && verdict == "evidence-only")
                    note("no 1-D condition certified this family; numerics only");
            } else if (cons.rule == "perturbed-1d") {
                build();
                PerturbedSequence raw;
                raw = cons.values.empty() ? PerturbedSequence::from_deltas(cons.n_start, cons.deltas)
                                          : PerturbedSequence::from_values(cons.n_start, cons.values);
                const bool certified = one_dim_flow(raw);
                run_evidence(false);
                if (!certified && verdict == "evidence-only")
                    note("no 1-D condition certified this family; numerics only");
            } else if (cons.rule == "rectangular") {
                build();
                theorem = "rectangular-rounding";
                verdict = "certified-riesz-by-theorem";
                // Per-axis Kadec data gives explicit bounds when every
                // centered axis perturbation stays below 1/4.
                std::vector<double> ls;
                bool all_quarter = true;
                for (std::size_t k = 0; k < cons.diagonal.size(); ++k) {
                    const double step = 1.0 / cons.diagonal[k];
                    const double off = cons.offsets.empty() ? 0.0 : cons.offsets[k];
                    std::vector<double> vals;
                    for (long long n = -radius; n <= radius; ++n)
                        vals.push_back(cons.diagonal[k] *
                                       static_cast<double>(round_half_up(step * static_cast<double>(n) + off)));
                    PerturbedSequence axis = PerturbedSequence::from_values(-radius, std::move(vals));
                    axis = pipe::center_deltas(axis, pipe::delta_mean(axis));
                    const ConditionReport kad = kadec_condition_check(axis);
                    ConditionReport named = kad;
                    named.name = "kadec-quarter(axis " + std::to_string(k) + ")";
                    conditions.push(json_from_condition(named));
                    all_quarter = all_quarter && kad.satisfied;
                    ls.push_back(kad.measured);
                }
                if (all_quarter)
                    bounds.push(json_from_bound_cert(tensor_bounds(ls)));
                else
                    note("an axis exceeds the quarter condition; certified without explicit bounds");
                run_evidence(false);
            } else if (cons.rule == "tensor") {
                build();
                std::vector<double> ls;
                bool all = true;
                for (std::size_t k = 0; k < cons.factors.size(); ++k) {
                    const ConstructionSpec& f = cons.factors[k];
                    PerturbedSequence raw;
                    if (f.rule == "beatty") {
                        const FreqSet fs = pipe::build_set(rc, f, f.has_n ? f.n_radius : radius);
                        raw = pipe::beatty_sequence(fs, f.alpha);
                    } else if (f.rule == "perturbed-1d") {
                        raw = f.values.empty() ? PerturbedSequence::from_deltas(f.n_start, f.deltas)
                                               : PerturbedSequence::from_values(f.n_start, f.values);
                    } else {
                        note("factor " + std::to_string(k) + " (" + f.rule +
                             ") has no 1-D condition check");
                        all = false;
                        continue;
                    }
                    const PerturbedSequence seq = pipe::center_deltas(raw, pipe::delta_mean(raw));
                    ConditionReport kad = kadec_condition_check(seq);
                    kad.name = "kadec-quarter(factor " + std::to_string(k) + ")";
                    conditions.push(json_from_condition(kad));
                    all = all && kad.satisfied;
                    ls.push_back(kad.measured);
                }
                run_evidence(false);
                if (all && !ls.empty()) {
                    bounds.push(json_from_bound_cert(tensor_bounds(ls)));
                    theorem = "tensor-product";
                    verdict = "certified-riesz-by-theorem";
                }
            } else {
                // Witness flow (rounded-dual / lifted / default).
                if (!rc.has_a) throw ConfigError("A", "certify needs the domain matrix A");
                const bool orth = rc.mode == "orthogonal";
                if (orth) {
                    // Volume integrality is necessary for an orthogonal
                    // basis inside B Z^d: 1/|det(B^T A)| must be a
                    // positive integer.
                    const double q = 1.0 / std::abs(det(bmat.transposed() * rc.a));
                    if (!pipe::is_positive_integer(q, rc.tol.witness)) {
                        note("1/|det(B^T A)| = " + std::to_string(q) +
                             " is not a positive integer; no orthogonal exponential basis inside "
                             "the prescribed lattice exists");
                        theorem = "volume-integrality";
                        verdict = "rejected";
                    }
                }
                if (verdict != "rejected") {
                    Witness w;
                    bool have = false;
                    if (rc.has_witness) {
                        w = rc.witness;
                        const WitnessReport wr = check_witness(rc.a, bmat, w, rc.tol.witness);
                        witness_json = json_from_witness(w);
                        witness_report_json = json_from_witness_report(wr);
                        if (!wr.accepted) {
                            note("provided witness violates its hypotheses; the run's claim is "
                                 "rejected (existence of another witness is undecided)");
                            verdict = "rejected";
                        } else {
                            have = true;
                        }
                    } else {
                        const WitnessMode mode = orth ? WitnessMode::Orthogonal : WitnessMode::Riesz;
                        if (find_witness_heuristic(rc.a, bmat, mode, w, rc.tol.witness)) {
                            witness_json = json_from_witness(w);
                            witness_report_json =
                                json_from_witness_report(check_witness(rc.a, bmat, w, rc.tol.witness));
                            have = true;
                        } else if (!orth && spectral_norm(rc.a) < spectral_norm_threshold(rc.a.n)) {
                            // Fallback: the norm theorem needs no witness.
                            const double measured = spectral_norm(rc.a);
                            const double threshold = spectral_norm_threshold(rc.a.n);
                            ConditionReport thr;
                            thr.name = "spectral-norm-threshold";
                            thr.satisfied = true;
                            thr.measured = measured;
                            thr.threshold = threshold;
                            thr.margin = threshold - measured;
                            conditions.push(json_from_condition(thr));
                            cons.rule = "spectral-norm";
                            built = pipe::build_set(rc, cons, radius);
                            has_built = true;
                            freq_json = json_from_freq_set(built);
                            const double sup_l =
                                measured * std::sqrt(static_cast<double>(rc.a.n)) / 2.0;
                            conditions.push(
                                json_from_condition(bailey_condition_check(built, rc.a, sup_l)));
                            run_evidence(false);
                            theorem = "spectral-norm-rounding";
                            verdict = "certified-riesz-by-theorem";
                        } else {
                            note("restricted witness search found no decomposition; undecided");
                            verdict = "unknown";
                        }
                    }
                    if (have) {
                        if (cons.has_h)
                            note("certify derives the construction from the witness; "
                                 "construction.H is ignored");
                        FreqSet base = rounded_dual_construction(w.H, radius);
                        built = lift_frequencies(base, w.R, bmat);
                        has_built = true;
                        freq_json = json_from_freq_set(built);
                        ConstructionSpec eff;
                        eff.rule = "lifted";
                        eff.h = w.H;
                        eff.has_h = true;
                        eff.r = w.R;
                        eff.has_r = true;
                        eff.n_radius = radius;
                        eff.has_n = true;
                        cons = eff;
                        run_evidence(orth);
                        if (orth) {
                            if (has_orth && !last_orth.orthogonal) {
                                note("window counterexample contradicts the accepted witness; "
                                     "numerical fault");
                                verdict = "rejected";
                            } else {
                                theorem = "unitriangular-decomposition";
                                verdict = "certified-orthogonal";
                                BoundCert exact;
                                exact.lower = 1.0;
                                exact.upper = 1.0;
                                exact.log_lower = 0.0;
                                exact.source = "orthogonal-basis(normalized)";
                                bounds.push(json_from_bound_cert(exact));
                            }
                        } else {
                            theorem = "triangular-decomposition";
                            verdict = "certified-riesz-by-theorem";
                        }
                    }
                }
            }
        } else {
            throw ConfigError("command", "unhandled command \"" + rc.command + "\"");
        }

        if (rc.has_equidist)
            equidist_json = json_from_equidist(equidistribution_check(
                rc.eq_alpha, rc.eq_betas, rc.eq_block, rc.eq_m_lo, rc.eq_m_hi, rc.eq_epsilon));
    } catch (const ConfigError&) {
        throw; // config problems abort the run instead of producing a verdict
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        note(std::string("error: ") + e.what());
        verdict = pipe::error_verdict(e);
        if (verdict == "rejected") theorem = "none";
    }

    JsonValue rep = JsonValue::object();
    rep.set("schema", "paralattice-report-v1");
    rep.set("command", rc.command);
    rep.set("config", rc.echo);
    rep.set("verdict", verdict);
    rep.set("theorem", theorem);
    rep.set("conditions", std::move(conditions));
    rep.set("bounds", std::move(bounds));
    rep.set("witness", std::move(witness_json));
    rep.set("witness_report", std::move(witness_report_json));
    rep.set("freq_set", std::move(freq_json));
    rep.set("orthogonality", std::move(orth_json));
    rep.set("gram", std::move(gram_json));
    rep.set("density", std::move(density_json));
    rep.set("equidistribution", std::move(equidist_json));
    rep.set("points_emitted", std::move(points_json));
    rep.set("notes", std::move(notes));

    res.report = std::move(rep);
    res.verdict = verdict;
    res.theorem = theorem;
    res.exit_code = (verdict == "certified-orthogonal" || verdict == "certified-riesz-by-theorem" ||
                     verdict == "evidence-only")
                        ? 0
                        : 1;
    return res;
}

} // namespace paralattice
