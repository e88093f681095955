#include <doctest.h>

#include <cmath>
#include <set>
#include <utility>

#include "paralattice/constructions.hpp"

using namespace paralattice;

namespace {
Mat triangular_example() {
    return Mat::from_rows({{1.0 / std::sqrt(3.0), 0.0},
                           {1.0 / std::sqrt(5.0), 1.0 / std::sqrt(2.0)}});
}

/// Point of the rounded dual with generating index (n, m).
std::pair<double, double> find_point(const FreqSet& s, long long n, long long m) {
    for (std::int64_t i = 0; i < s.size(); ++i)
        if (s.index(i)[0] == n && s.index(i)[1] == m)
            return {s.point(i)[0], s.point(i)[1]};
    FAIL("index not found");
    return {0.0, 0.0};
}
} // namespace

TEST_CASE("rounded dual of the triangular example") {
    const FreqSet s = rounded_dual_construction(triangular_example(), 3);
    REQUIRE(s.size() == 49);
    CHECK(s.integral);
    CHECK(s.index_radius == 3);
    CHECK(s.provenance == Provenance::RoundedDual);

    // Dual point for (n, m) = (1, 1) is (sqrt3 - sqrt(6/5), sqrt2) which
    // rounds to (1, 1).
    const auto p = find_point(s, 1, 1);
    CHECK(p.first == 1.0);
    CHECK(p.second == 1.0);

    // Second coordinates r(sqrt2 * m) over m in [-3, 3].
    std::set<double> second;
    for (std::int64_t i = 0; i < s.size(); ++i) second.insert(s.point(i)[1]);
    CHECK(second == std::set<double>{-4, -3, -1, 0, 1, 3, 4});
}

TEST_CASE("rounded dual rejects wrong structure") {
    CHECK_THROWS_AS(rounded_dual_construction(Mat::from_rows({{1.0, 0.5}, {0.0, 1.0}}), 2),
                    BadStructureError);
    CHECK_THROWS_AS(rounded_dual_construction(Mat::from_rows({{1.5, 0.0}, {0.0, 1.0}}), 2),
                    BadStructureError);
}

TEST_CASE("rectangular products enumerate per-axis roundings") {
    const FreqSet s = rectangular_construction({1.0, 0.5}, {}, 2);
    REQUIRE(s.size() == 25);
    CHECK(s.integral);
    // First point is the index corner (-2, -2) -> (-2, r(2*-2)) = (-2, -4).
    CHECK(s.point(0)[0] == -2.0);
    CHECK(s.point(0)[1] == -4.0);
    CHECK(s.point(24)[0] == 2.0);
    CHECK(s.point(24)[1] == 4.0);

    CHECK_THROWS_AS(rectangular_construction({1.5}, {}, 2), BadDiagonalError);
    CHECK_THROWS_AS(rectangular_construction({0.5, 0.5}, {0.1}, 2), BadDiagonalError);
    CHECK_THROWS_AS(rectangular_construction({}, {}, 2), BadDiagonalError);
}

TEST_CASE("lifting applies B R^T and preserves cardinality") {
    const FreqSet base = rounded_dual_construction(triangular_example(), 2);
    const Mat r = Mat::from_rows({{1.0, 1.0}, {0.0, 1.0}});
    const FreqSet lifted = lift_frequencies(base, r, Mat::identity(2));
    REQUIRE(lifted.size() == base.size());
    CHECK(lifted.integral);
    CHECK(lifted.provenance == Provenance::Lifted);
    // R^T (x, y) = (x, x + y) for this R.
    for (std::int64_t i = 0; i < base.size(); ++i) {
        CHECK(lifted.point(i)[0] == base.point(i)[0]);
        CHECK(lifted.point(i)[1] == base.point(i)[0] + base.point(i)[1]);
    }

    CHECK_THROWS_AS(lift_frequencies(base, Mat::from_rows({{0.5, 0.0}, {0.0, 1.0}}),
                                     Mat::identity(2)),
                    OutOfRangeError);
    FreqSet fractional = base;
    fractional.integral = false;
    CHECK_THROWS_AS(lift_frequencies(fractional, r, Mat::identity(2)), OutOfRangeError);
}

TEST_CASE("norm-gated rounding admits small matrices and rejects large ones") {
    CHECK(spectral_norm_threshold(2) == doctest::Approx(0.156012).epsilon(1e-4));

    const FreqSet s = spectral_norm_construction(0.1 * Mat::identity(2), 3);
    REQUIRE(s.size() == 49);
    const auto* p = s.point(0); // index (-3, -3) -> 10 * (-3, -3)
    CHECK(p[0] == -30.0);
    CHECK(p[1] == -30.0);

    try {
        spectral_norm_construction(0.2 * Mat::identity(2), 3);
        FAIL("expected NormTooLargeError");
    } catch (const NormTooLargeError& e) {
        CHECK(e.measured == doctest::Approx(0.2).epsilon(1e-9));
        CHECK(e.threshold == doctest::Approx(0.156012).epsilon(1e-4));
    }
}

TEST_CASE("tensor products run lexicographically, first factor slowest") {
    const FreqSet f1 = beatty_fraenkel(1.0, 0.0, 0, 1);  // {0, 1}
    const FreqSet f2 = beatty_fraenkel(1.0, 0.0, 0, 2);  // {0, 1, 2}
    const FreqSet t = tensor_product({f1, f2});
    REQUIRE(t.size() == 6);
    CHECK(t.dim == 2);
    CHECK(t.integral);
    CHECK(t.point(0)[0] == 0.0);
    CHECK(t.point(0)[1] == 0.0);
    CHECK(t.point(1)[0] == 0.0);
    CHECK(t.point(1)[1] == 1.0);
    CHECK(t.point(3)[0] == 1.0);
    CHECK(t.point(3)[1] == 0.0);

    FreqSet two_d = t;
    CHECK_THROWS_AS(tensor_product({two_d}), OutOfRangeError);
    CHECK_THROWS_AS(tensor_product({}), OutOfRangeError);
}
