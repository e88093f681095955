#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "paralattice/witness.hpp"

using namespace paralattice;

namespace {
Mat triangular_example() {
    return Mat::from_rows({{1.0 / std::sqrt(3.0), 0.0},
                           {1.0 / std::sqrt(5.0), 1.0 / std::sqrt(2.0)}});
}

bool has_failure(const WitnessReport& r, const std::string& name) {
    return std::find(r.failures.begin(), r.failures.end(), name) != r.failures.end();
}
} // namespace

TEST_CASE("parallelepiped equality is permutation invariance") {
    const Mat a = triangular_example();
    CHECK(parallelepiped_equal(a, a * perm_matrix({1, 0})));
    CHECK(parallelepiped_equal(a, a));
    CHECK_FALSE(parallelepiped_equal(a, 2.0 * a));
}

TEST_CASE("heuristic search finds the triangular witness with B = I") {
    const Mat a = triangular_example();
    Witness w;
    REQUIRE(find_witness_heuristic(a, Mat::identity(2), WitnessMode::Riesz, w));
    // B^T A is already lower triangular with diagonals in (0,1], so the
    // identity permutation works and H equals A itself.
    CHECK(w.H.at(0, 0) == doctest::Approx(a.at(0, 0)));
    CHECK(w.H.at(1, 1) == doctest::Approx(a.at(1, 1)));
    CHECK(w.P == std::vector<int>{0, 1});

    const WitnessReport rep = check_witness(a, Mat::identity(2), w);
    CHECK(rep.accepted);
    CHECK(rep.failures.empty());
    CHECK(rep.residual < 1e-9);
}

TEST_CASE("no unitriangular witness exists for the triangular example") {
    const Mat a = triangular_example();
    Witness w;
    CHECK_FALSE(find_witness_heuristic(a, Mat::identity(2), WitnessMode::Orthogonal, w));
}

TEST_CASE("rotations have no triangular witness under the restricted search") {
    const double c = 0.1 * std::sqrt(3.0) / 2.0;
    const Mat rot = Mat::from_rows({{c, -0.05}, {0.05, c}});
    Witness w;
    CHECK_FALSE(find_witness_heuristic(rot, Mat::identity(2), WitnessMode::Riesz, w));
}

TEST_CASE("witness verification names each violated clause") {
    const Mat a = triangular_example();

    Witness w;
    w.mode = WitnessMode::Riesz;
    w.H = a;
    w.P = {0, 1};

    SUBCASE("non-integer R") {
        w.R = Mat::from_rows({{0.5, 0.0}, {0.0, 1.0}});
        const WitnessReport rep = check_witness(a, Mat::identity(2), w);
        CHECK_FALSE(rep.accepted);
        CHECK(has_failure(rep, "integer_R"));
    }
    SUBCASE("singular R") {
        w.R = Mat::from_rows({{1.0, 1.0}, {1.0, 1.0}});
        const WitnessReport rep = check_witness(a, Mat::identity(2), w);
        CHECK(has_failure(rep, "nonsingular_R"));
    }
    SUBCASE("diagonal above one") {
        w.R = Mat::identity(2);
        w.H = Mat::from_rows({{1.2, 0.0}, {0.3, 0.5}});
        const WitnessReport rep = check_witness(a, Mat::identity(2), w);
        CHECK(has_failure(rep, "diag_in_unit_interval"));
    }
    SUBCASE("bad permutation array") {
        w.R = Mat::identity(2);
        w.P = {0, 0};
        const WitnessReport rep = check_witness(a, Mat::identity(2), w);
        CHECK(has_failure(rep, "permutation_P"));
    }
    SUBCASE("wrong parallelepiped") {
        w.R = Mat::identity(2);
        w.H = Mat::from_rows({{0.9, 0.0}, {0.0, 0.9}});
        const WitnessReport rep = check_witness(a, Mat::identity(2), w);
        CHECK(has_failure(rep, "parallelepiped_equal"));
    }
    SUBCASE("orthogonal mode demands a unit diagonal") {
        w.mode = WitnessMode::Orthogonal;
        w.R = Mat::identity(2);
        const WitnessReport rep = check_witness(a, Mat::identity(2), w);
        CHECK(has_failure(rep, "unitriangular"));
    }
}
