#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "paralattice/config.hpp"
#include "paralattice/pipeline.hpp"

using namespace paralattice;
using nlohmann::json;

namespace {

json triangular_matrix() {
    return json::array({json::array({"1/sqrt(3)", "0"}),
                        json::array({"1/sqrt(5)", "1/sqrt(2)"})});
}

json rotation_matrix() {
    return json::array({json::array({"0.1*sqrt(3)/2", "-0.05"}),
                        json::array({"0.05", "0.1*sqrt(3)/2"})});
}

bool report_contains(const ExecResult& res, const std::string& needle) {
    return res.report.dump(2).find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("config parsing resolves expressions and defaults") {
    json j = {{"command", "certify"}, {"A", triangular_matrix()}};
    const RunConfig rc = parse_config_json(j, "");
    CHECK(rc.command == "certify");
    CHECK(rc.mode == "riesz");
    REQUIRE(rc.has_a);
    CHECK(rc.a.at(0, 0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(rc.a.at(1, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_FALSE(rc.has_b);
    CHECK(rc.b.at(0, 0) == 1.0); // defaulted to the identity
    CHECK(rc.tol.orthogonality == kEpsNum);
}

TEST_CASE("config errors carry field paths") {
    CHECK_THROWS_AS(parse_config_json(json{{"command", "frobnicate"}}, ""), ConfigError);
    CHECK_THROWS_AS(parse_config_json(json::array(), ""), ConfigError);

    json bad_row = {{"command", "certify"},
                    {"A", json::array({json::array({"1", "0"}), json::array({"0"})})}};
    CHECK_THROWS_AS(parse_config_json(bad_row, ""), ConfigError);

    json bad_expr = {{"command", "certify"},
                     {"A", json::array({json::array({"1", "frob"}), json::array({"0", "1"})})}};
    try {
        parse_config_json(bad_expr, "");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("A[0][1]") != std::string::npos);
    }

    json singular = {{"command", "certify"},
                     {"A", json::array({json::array({1.0, 1.0}), json::array({1.0, 1.0})})}};
    CHECK_THROWS_AS(parse_config_json(singular, ""), ConfigError);
}

TEST_CASE("certify accepts the triangular example through its witness") {
    json j = {{"command", "certify"},
              {"A", triangular_matrix()},
              {"ladder_radii", json::array({3, 6})},
              {"density_radii", json::array({30, 60})}};
    const ExecResult res = execute(parse_config_json(j, ""));
    CHECK(res.verdict == "certified-riesz-by-theorem");
    CHECK(res.theorem == "triangular-decomposition");
    CHECK(res.exit_code == 0);
    CHECK(report_contains(res, "\"accepted\": true"));
    CHECK(report_contains(res, "\"schema\": \"paralattice-report-v1\""));
}

TEST_CASE("orthogonal certification fails on non-integral volume") {
    json j = {{"command", "certify"}, {"mode", "orthogonal"}, {"A", triangular_matrix()}};
    const ExecResult res = execute(parse_config_json(j, ""));
    CHECK(res.verdict == "rejected");
    CHECK(res.theorem == "volume-integrality");
    CHECK(res.exit_code == 1);
}

TEST_CASE("prescribed lattices certify orthogonal exactly when unimodular") {
    // M Z^2 = Z^2 for unimodular integer M: full orthogonal basis.
    json uni = {{"command", "certify"},
                {"A", json::array({json::array({1, 0}), json::array({0, 1})})},
                {"construction",
                 {{"rule", "lattice"},
                  {"M", json::array({json::array({1, 1}), json::array({0, 1})})},
                  {"N", 3}}},
                {"run_ladder", false},
                {"run_density", false}};
    const ExecResult ok = execute(parse_config_json(uni, ""));
    CHECK(ok.verdict == "certified-orthogonal");
    CHECK(ok.theorem == "dual-lattice-orthogonality");
    CHECK(ok.exit_code == 0);
    CHECK(report_contains(ok, "orthogonal-basis(normalized)"));

    // 2Z is an orthogonal sequence but covers only half the density:
    // the window Gram shows no counterexample, the volume test disproves
    // completeness anyway.
    json sparse = {{"command", "certify"},
                   {"A", json::array({json::array({1})})},
                   {"construction",
                    {{"rule", "lattice"}, {"M", json::array({json::array({2})})}, {"N", 40}}},
                   {"density_radii", json::array({30, 60})}};
    const ExecResult bad = execute(parse_config_json(sparse, ""));
    CHECK(bad.verdict == "rejected");
    CHECK(bad.theorem == "volume-integrality");
    CHECK(bad.exit_code == 1);
    CHECK(report_contains(bad, "incomplete"));
}

TEST_CASE("small rotations certify through the norm threshold") {
    json j = {{"command", "certify"},
              {"A", rotation_matrix()},
              {"construction", {{"rule", "spectral-norm"}, {"N", 5}}},
              {"ladder_radii", json::array({3, 5})},
              {"density_radii", json::array({60, 120})}};
    const ExecResult res = execute(parse_config_json(j, ""));
    CHECK(res.verdict == "certified-riesz-by-theorem");
    CHECK(res.theorem == "spectral-norm-rounding");
    CHECK(report_contains(res, "spectral-norm-threshold"));
    CHECK(report_contains(res, "sup-norm-perturbation"));
}

TEST_CASE("oversized rotations are rejected with the norm error embedded") {
    json j = {{"command", "certify"},
              {"A", json::array({json::array({"0.2", "0"}), json::array({"0", "0.2"})})},
              {"construction", {{"rule", "spectral-norm"}}}};
    const ExecResult res = execute(parse_config_json(j, ""));
    CHECK(res.verdict == "rejected");
    CHECK(res.exit_code == 1);
    CHECK(report_contains(res, "spectral-norm-threshold"));
}

TEST_CASE("floor sequences certify through the centered quarter condition") {
    json j = {{"command", "certify"},
              {"construction",
               {{"rule", "beatty"}, {"alpha", "2/3"}, {"beta", 0}, {"N", 60}}},
              {"ladder_radii", json::array({20, 40})},
              {"density_radii", json::array({300, 600})}};
    const ExecResult res = execute(parse_config_json(j, ""));
    CHECK(res.verdict == "certified-riesz-by-theorem");
    CHECK(res.theorem == "kadec-quarter");
    CHECK(report_contains(res, "\"density\""));
}

TEST_CASE("alternating large perturbations certify through block means") {
    std::vector<double> deltas;
    for (int i = 0; i < 40; ++i) {
        deltas.push_back(0.3);
        deltas.push_back(-0.3);
    }
    json j = {{"command", "certify"},
              {"construction",
               {{"rule", "perturbed-1d"}, {"n_start", -40}, {"deltas", deltas}, {"P", 2}}},
              {"ladder_radii", json::array({15, 30})},
              {"density_radii", json::array({20, 35})}};
    const ExecResult res = execute(parse_config_json(j, ""));
    CHECK(res.verdict == "certified-riesz-by-theorem");
    CHECK(res.theorem == "avdonin-mean-quarter");
    CHECK(report_contains(res, "avdonin-mean-quarter"));
    CHECK(report_contains(res, "mean-condition-explicit"));
}

TEST_CASE("bounds command evaluates the requested formulas") {
    json j = {{"command", "bounds"},
              {"bounds", {{"L", 0.2}, {"Ls", json::array({0.2, 0.1})}, {"Bp", 0},
                          {"delta", 1}, {"P", 1}}}};
    const ExecResult res = execute(parse_config_json(j, ""));
    CHECK(res.verdict == "evidence-only");
    CHECK(res.exit_code == 0);
    CHECK(report_contains(res, "kadec-quarter(L="));
    CHECK(report_contains(res, "tensor-kadec(d=2)"));
    CHECK(report_contains(res, "mean-condition-explicit"));
    CHECK(report_contains(res, "\"underflow\": true"));
}

TEST_CASE("decompose reports the found witness or honest ignorance") {
    json hex = {{"command", "decompose"}, {"A", triangular_matrix()}};
    const ExecResult found = execute(parse_config_json(hex, ""));
    CHECK(found.verdict == "evidence-only");
    CHECK(report_contains(found, "\"witness\""));
    CHECK(report_contains(found, "\"accepted\": true"));

    json rot = {{"command", "decompose"}, {"A", rotation_matrix()}};
    const ExecResult missing = execute(parse_config_json(rot, ""));
    CHECK(missing.verdict == "unknown");
    CHECK(missing.exit_code == 1);
}

TEST_CASE("verify flags numerical counterexamples as rejection") {
    json j = {{"command", "verify"},
              {"mode", "orthogonal"},
              {"A", json::array({json::array({"1"})})},
              {"construction",
               {{"rule", "explicit"},
                {"points", json::array({json::array({0.0}), json::array({0.5})})}}},
              {"run_ladder", false},
              {"run_density", false}};
    const ExecResult res = execute(parse_config_json(j, ""));
    CHECK(res.verdict == "rejected");
    CHECK(res.exit_code == 1);
}

TEST_CASE("emitted point series match the closed forms") {
    json j = {{"command", "emit-points"},
              {"A", triangular_matrix()},
              {"construction", {{"rule", "rounded-dual"}, {"N", 2}}},
              {"series", json::array({"dual", "rounded", "vertices"})}};
    const ExecResult res = execute(parse_config_json(j, ""));
    REQUIRE(res.has_points);
    CHECK(res.points_dim == 2);

    // Vertices of A[0,1]^2 in mask order.
    std::vector<PointRow> verts;
    for (const PointRow& r : res.points)
        if (r.series == "vertices") verts.push_back(r);
    REQUIRE(verts.size() == 4);
    CHECK(verts[0].x[0] == doctest::Approx(0.0));
    CHECK(verts[1].x[0] == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(verts[1].x[1] == doctest::Approx(1.0 / std::sqrt(5.0)));
    CHECK(verts[2].x[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(verts[3].x[1] == doctest::Approx(1.0 / std::sqrt(5.0) + 1.0 / std::sqrt(2.0)));

    // The dual row (-sqrt(6/5), sqrt2) and its rounded partner (-1, 1).
    bool found_dual = false, found_rounded = false;
    for (const PointRow& r : res.points) {
        if (r.series == "dual" && std::abs(r.x[0] + std::sqrt(6.0 / 5.0)) < 1e-12 &&
            std::abs(r.x[1] - std::sqrt(2.0)) < 1e-12)
            found_dual = true;
        if (r.series == "rounded" && r.x[0] == -1.0 && r.x[1] == 1.0) found_rounded = true;
    }
    CHECK(found_dual);
    CHECK(found_rounded);
}

TEST_CASE("reports are byte-identical across runs") {
    json j = {{"command", "certify"},
              {"A", triangular_matrix()},
              {"ladder_radii", json::array({3, 5})},
              {"density_radii", json::array({20, 40})}};
    const RunConfig rc = parse_config_json(j, "");
    const std::string once = execute(rc).report.dump(2);
    const std::string twice = execute(rc).report.dump(2);
    CHECK(once == twice);
    CHECK_FALSE(once.empty());
}

TEST_CASE("equidistribution blocks attach to any command") {
    json j = {{"command", "bounds"},
              {"bounds", {{"L", 0.1}}},
              {"equidistribution",
               {{"alpha", "sqrt(2)"}, {"betas", json::array({0.0})}, {"P", 500},
                {"m_lo", 0}, {"m_hi", 2}, {"epsilon", 0.05}}}};
    const ExecResult res = execute(parse_config_json(j, ""));
    CHECK(report_contains(res, "\"equidistribution\""));
    CHECK(report_contains(res, "\"satisfied\": true"));
}
