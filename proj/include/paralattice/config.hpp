#pragma once

/// Run configuration: the JSON contract between the CLI and the pipeline.
///
/// Matrices are row-major nested arrays whose entries are numbers or
/// expression strings ("1/sqrt(3)"), so configs can state irrational
/// entries exactly as written instead of as truncated decimals. Every
/// parse failure throws ConfigError carrying the JSON field path.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "paralattice/errors.hpp"
#include "paralattice/expr.hpp"
#include "paralattice/json_writer.hpp"
#include "paralattice/matrix.hpp"
#include "paralattice/witness.hpp"

namespace paralattice {

/// One construction request; `factors` makes the type recursive so tensor
/// products can nest one-dimensional rules.
struct ConstructionSpec {
    std::string rule; ///< rounded-dual | rectangular | lifted | spectral-norm | tensor |
                      ///< beatty | lattice | dual-lattice | explicit | perturbed-1d
    int n_radius = 6; ///< index window radius where the rule needs one
    bool has_n = false;
    Mat h = Mat::identity(1);
    Mat r = Mat::identity(1);
    Mat m = Mat::identity(1);
    bool has_h = false, has_r = false, has_m = false;
    std::vector<double> diagonal, offsets;
    double alpha = 0.0, beta = 0.0;
    bool has_alpha = false;
    long long k_min = 0, k_max = 0;
    bool has_k_range = false;
    std::vector<ConstructionSpec> factors;
    std::vector<double> points; ///< explicit rule, flat row-major
    int points_dim = 0;
    std::vector<double> deltas, values; ///< perturbed-1d (exactly one of the two)
    long long n_start = 0;
    long long block_len = 0; ///< P for the mean condition, 0 = unset
    double sep_min = 0.0;
    bool has_sep_min = false;
};

/// Parameters for the standalone `bounds` command.
struct BoundsRequest {
    bool has_kadec = false;
    double kadec_l = 0.0;
    bool has_tensor = false;
    std::vector<double> tensor_ls;
    bool has_mean = false;
    double bp = 0.0, delta = 0.0, mean_l = 0.0;
    long long mean_p = 0;
};

struct Tolerances {
    double orthogonality = kEpsNum; ///< off-diagonal cap as a multiple of |det A|
    double witness = kEpsNum;       ///< structural comparisons in witness checks
};

struct RunConfig {
    std::string command;
    std::string mode = "riesz"; ///< target basis mode for certify/decompose
    bool has_a = false, has_b = false;
    Mat a = Mat::identity(1);
    Mat b = Mat::identity(1);
    bool has_witness = false;
    Witness witness;
    bool has_construction = false;
    ConstructionSpec construction;
    std::vector<int> ladder_radii;  ///< empty = dimension defaults
    std::vector<int> density_radii; ///< empty = dimension defaults
    bool run_ladder = true;
    bool run_density = true;
    bool has_equidist = false;
    double eq_alpha = 0.0;
    std::vector<double> eq_betas;
    long long eq_block = 0, eq_m_lo = 0, eq_m_hi = 0;
    double eq_epsilon = 1e-3;
    std::vector<std::string> series; ///< emit-points series selection
    bool has_bounds_req = false;
    BoundsRequest bounds_req;
    Tolerances tol;
    JsonValue echo; ///< parsed config re-serialized into the report
};

namespace detail {

using nlohmann::json;

inline std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

[[noreturn]] inline void cfg_fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path, msg);
}

inline double parse_scalar(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return eval_expression(j.get<std::string>(), path);
    cfg_fail(path, "expected a number or an expression string");
}

inline long long parse_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) cfg_fail(path, "expected an integer");
    return j.get<long long>();
}

inline Mat parse_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) cfg_fail(path, "expected a non-empty array of rows");
    const auto n = static_cast<int>(j.size());
    if (n > kMaxDim) cfg_fail(path, "dimension exceeds the supported maximum " + std::to_string(kMaxDim));
    Mat m = Mat::identity(n);
    for (int i = 0; i < n; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        const std::string rp = path + "[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            cfg_fail(rp, "expected a row of " + std::to_string(n) + " entries (square matrix)");
        for (int k = 0; k < n; ++k)
            m.at(i, k) = parse_scalar(row[static_cast<std::size_t>(k)],
                                      rp + "[" + std::to_string(k) + "]");
    }
    return m;
}

inline std::vector<double> parse_scalar_list(const json& j, const std::string& path) {
    if (!j.is_array()) cfg_fail(path, "expected an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(parse_scalar(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline std::vector<int> parse_radii(const json& j, const std::string& path) {
    if (!j.is_array()) cfg_fail(path, "expected an array of radii");
    std::vector<int> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(static_cast<int>(parse_integer(j[i], path + "[" + std::to_string(i) + "]")));
    return out;
}

inline ConstructionSpec parse_construction(const json& j, const std::string& path);

inline void parse_construction_fields(const json& j, const std::string& path, ConstructionSpec& c) {
    if (!j.is_object()) cfg_fail(path, "expected an object");
    if (!j.contains("rule") || !j["rule"].is_string()) cfg_fail(join_path(path, "rule"), "missing rule name");
    c.rule = j["rule"].get<std::string>();
    if (j.contains("N")) {
        c.n_radius = static_cast<int>(parse_integer(j["N"], join_path(path, "N")));
        c.has_n = true;
        if (c.n_radius < 0) cfg_fail(join_path(path, "N"), "radius must be >= 0");
    }
    if (j.contains("H")) {
        c.h = parse_matrix(j["H"], join_path(path, "H"));
        c.has_h = true;
    }
    if (j.contains("R")) {
        c.r = parse_matrix(j["R"], join_path(path, "R"));
        c.has_r = true;
    }
    if (j.contains("M")) {
        c.m = parse_matrix(j["M"], join_path(path, "M"));
        c.has_m = true;
    }
    if (j.contains("diagonal")) c.diagonal = parse_scalar_list(j["diagonal"], join_path(path, "diagonal"));
    if (j.contains("offsets")) c.offsets = parse_scalar_list(j["offsets"], join_path(path, "offsets"));
    if (j.contains("alpha")) {
        c.alpha = parse_scalar(j["alpha"], join_path(path, "alpha"));
        c.has_alpha = true;
    }
    if (j.contains("beta")) c.beta = parse_scalar(j["beta"], join_path(path, "beta"));
    if (j.contains("k_min") || j.contains("k_max")) {
        if (!j.contains("k_min") || !j.contains("k_max"))
            cfg_fail(path, "k_min and k_max must be given together");
        c.k_min = parse_integer(j["k_min"], join_path(path, "k_min"));
        c.k_max = parse_integer(j["k_max"], join_path(path, "k_max"));
        c.has_k_range = true;
    }
    if (j.contains("factors")) {
        const json& f = j["factors"];
        if (!f.is_array() || f.empty()) cfg_fail(join_path(path, "factors"), "expected a non-empty array");
        for (std::size_t i = 0; i < f.size(); ++i)
            c.factors.push_back(
                parse_construction(f[i], join_path(path, "factors[" + std::to_string(i) + "]")));
    }
    if (j.contains("points")) {
        const json& p = j["points"];
        const std::string pp = join_path(path, "points");
        if (!p.is_array() || p.empty()) cfg_fail(pp, "expected a non-empty array of points");
        for (std::size_t i = 0; i < p.size(); ++i) {
            const json& row = p[i];
            const std::string rp = pp + "[" + std::to_string(i) + "]";
            if (!row.is_array() || row.empty()) cfg_fail(rp, "expected a coordinate array");
            if (c.points_dim == 0)
                c.points_dim = static_cast<int>(row.size());
            else if (static_cast<int>(row.size()) != c.points_dim)
                cfg_fail(rp, "inconsistent point dimension");
            for (std::size_t k = 0; k < row.size(); ++k)
                c.points.push_back(parse_scalar(row[k], rp + "[" + std::to_string(k) + "]"));
        }
    }
    if (j.contains("deltas")) c.deltas = parse_scalar_list(j["deltas"], join_path(path, "deltas"));
    if (j.contains("values")) c.values = parse_scalar_list(j["values"], join_path(path, "values"));
    if (j.contains("n_start")) c.n_start = parse_integer(j["n_start"], join_path(path, "n_start"));
    if (j.contains("P")) c.block_len = parse_integer(j["P"], join_path(path, "P"));
    if (j.contains("sep_min")) {
        c.sep_min = parse_scalar(j["sep_min"], join_path(path, "sep_min"));
        c.has_sep_min = true;
    }
}

inline ConstructionSpec parse_construction(const json& j, const std::string& path) {
    ConstructionSpec c;
    parse_construction_fields(j, path, c);
    return c;
}

inline Witness parse_witness(const json& j, const std::string& path) {
    if (!j.is_object()) cfg_fail(path, "expected an object");
    for (const char* key : {"R", "H", "P", "mode"})
        if (!j.contains(key)) cfg_fail(join_path(path, key), "missing witness field");
    Witness w;
    w.R = parse_matrix(j["R"], join_path(path, "R"));
    w.H = parse_matrix(j["H"], join_path(path, "H"));
    const json& p = j["P"];
    const std::string pp = join_path(path, "P");
    if (!p.is_array()) cfg_fail(pp, "expected a permutation index array");
    for (std::size_t i = 0; i < p.size(); ++i)
        w.P.push_back(static_cast<int>(parse_integer(p[i], pp + "[" + std::to_string(i) + "]")));
    const std::string mode = j["mode"].get<std::string>();
    if (mode == "orthogonal")
        w.mode = WitnessMode::Orthogonal;
    else if (mode == "riesz")
        w.mode = WitnessMode::Riesz;
    else
        cfg_fail(join_path(path, "mode"), "mode must be \"orthogonal\" or \"riesz\"");
    return w;
}

/// nlohmann values (alphabetical member order) converted to the ordered
/// writer so the echo is deterministic.
inline JsonValue echo_json(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return {};
        case json::value_t::boolean: return {j.get<bool>()};
        case json::value_t::number_integer:
        case json::value_t::number_unsigned: return {j.get<long long>()};
        case json::value_t::number_float: return {j.get<double>()};
        case json::value_t::string: return {j.get<std::string>()};
        case json::value_t::array: {
            JsonValue a = JsonValue::array();
            for (const auto& it : j) a.push(echo_json(it));
            return a;
        }
        case json::value_t::object: {
            JsonValue o = JsonValue::object();
            for (auto it = j.begin(); it != j.end(); ++it) o.set(it.key(), echo_json(it.value()));
            return o;
        }
        default: return {};
    }
}

} // namespace detail

inline RunConfig parse_config_json(const nlohmann::json& j, const std::string& source) {
    using nlohmann::json;
    using detail::cfg_fail;
    using detail::join_path;
    if (!j.is_object()) cfg_fail(source, "top-level config must be an object");

    RunConfig rc;
    rc.echo = detail::echo_json(j);

    if (!j.contains("command") || !j["command"].is_string())
        cfg_fail(join_path(source, "command"), "missing command");
    rc.command = j["command"].get<std::string>();
    static const char* kCommands[] = {"construct", "verify",  "certify",
                                      "decompose", "bounds", "emit-points"};
    bool known = false;
    for (const char* c : kCommands) known |= rc.command == c;
    if (!known) cfg_fail(join_path(source, "command"), "unknown command \"" + rc.command + "\"");

    if (j.contains("mode")) {
        rc.mode = j["mode"].get<std::string>();
        if (rc.mode != "orthogonal" && rc.mode != "riesz")
            cfg_fail(join_path(source, "mode"), "mode must be \"orthogonal\" or \"riesz\"");
    }
    if (j.contains("A")) {
        rc.a = detail::parse_matrix(j["A"], join_path(source, "A"));
        rc.has_a = true;
        if (std::abs(det(rc.a)) <= singularity_threshold(rc.a))
            cfg_fail(join_path(source, "A"),
                     "matrix is singular; a degenerate parallelepiped has no exponential basis");
    }
    if (j.contains("B")) {
        rc.b = detail::parse_matrix(j["B"], join_path(source, "B"));
        rc.has_b = true;
        if (std::abs(det(rc.b)) <= singularity_threshold(rc.b))
            cfg_fail(join_path(source, "B"), "lattice basis matrix is singular");
    }
    if (rc.has_a && rc.has_b && rc.a.n != rc.b.n)
        cfg_fail(join_path(source, "B"), "A and B must have equal dimension");
    if (rc.has_a && !rc.has_b) rc.b = Mat::identity(rc.a.n);

    if (j.contains("witness")) {
        rc.witness = detail::parse_witness(j["witness"], join_path(source, "witness"));
        rc.has_witness = true;
    }
    if (j.contains("construction")) {
        rc.construction = detail::parse_construction(j["construction"], join_path(source, "construction"));
        rc.has_construction = true;
    }
    if (j.contains("ladder_radii"))
        rc.ladder_radii = detail::parse_radii(j["ladder_radii"], join_path(source, "ladder_radii"));
    if (j.contains("density_radii"))
        rc.density_radii = detail::parse_radii(j["density_radii"], join_path(source, "density_radii"));
    if (j.contains("run_ladder")) rc.run_ladder = j["run_ladder"].get<bool>();
    if (j.contains("run_density")) rc.run_density = j["run_density"].get<bool>();

    if (j.contains("equidistribution")) {
        const json& e = j["equidistribution"];
        const std::string ep = join_path(source, "equidistribution");
        for (const char* key : {"alpha", "betas", "P"})
            if (!e.contains(key)) cfg_fail(join_path(ep, key), "missing field");
        rc.eq_alpha = detail::parse_scalar(e["alpha"], join_path(ep, "alpha"));
        rc.eq_betas = detail::parse_scalar_list(e["betas"], join_path(ep, "betas"));
        rc.eq_block = detail::parse_integer(e["P"], join_path(ep, "P"));
        if (e.contains("m_lo")) rc.eq_m_lo = detail::parse_integer(e["m_lo"], join_path(ep, "m_lo"));
        if (e.contains("m_hi")) rc.eq_m_hi = detail::parse_integer(e["m_hi"], join_path(ep, "m_hi"));
        if (e.contains("epsilon")) rc.eq_epsilon = detail::parse_scalar(e["epsilon"], join_path(ep, "epsilon"));
        rc.has_equidist = true;
    }

    if (j.contains("series")) {
        const json& s = j["series"];
        const std::string sp = join_path(source, "series");
        if (!s.is_array()) cfg_fail(sp, "expected an array of series names");
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::string name = s[i].get<std::string>();
            if (name != "lattice" && name != "dual" && name != "rounded" && name != "vertices")
                cfg_fail(sp + "[" + std::to_string(i) + "]", "unknown series \"" + name + "\"");
            rc.series.push_back(name);
        }
    }

    if (j.contains("bounds")) {
        const json& b = j["bounds"];
        const std::string bp = join_path(source, "bounds");
        if (!b.is_object()) cfg_fail(bp, "expected an object");
        if (b.contains("L")) {
            rc.bounds_req.kadec_l = detail::parse_scalar(b["L"], join_path(bp, "L"));
            rc.bounds_req.has_kadec = true;
        }
        if (b.contains("Ls")) {
            rc.bounds_req.tensor_ls = detail::parse_scalar_list(b["Ls"], join_path(bp, "Ls"));
            rc.bounds_req.has_tensor = true;
        }
        if (b.contains("Bp") || b.contains("delta") || b.contains("P")) {
            for (const char* key : {"Bp", "delta", "L", "P"})
                if (!b.contains(key))
                    cfg_fail(join_path(bp, key), "mean-condition bounds need Bp, delta, L, P");
            rc.bounds_req.bp = detail::parse_scalar(b["Bp"], join_path(bp, "Bp"));
            rc.bounds_req.delta = detail::parse_scalar(b["delta"], join_path(bp, "delta"));
            rc.bounds_req.mean_l = detail::parse_scalar(b["L"], join_path(bp, "L"));
            rc.bounds_req.mean_p = detail::parse_integer(b["P"], join_path(bp, "P"));
            rc.bounds_req.has_mean = true;
        }
        rc.has_bounds_req = true;
    }

    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        const std::string tp = join_path(source, "tolerances");
        if (t.contains("orthogonality"))
            rc.tol.orthogonality = detail::parse_scalar(t["orthogonality"], join_path(tp, "orthogonality"));
        if (t.contains("witness"))
            rc.tol.witness = detail::parse_scalar(t["witness"], join_path(tp, "witness"));
    }
    return rc;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path, std::string("JSON parse error: ") + e.what());
    }
    return parse_config_json(j, "");
}

} // namespace paralattice
