#include <doctest.h>

#include <cmath>

#include "paralattice/matrix.hpp"

using namespace paralattice;

namespace {
Mat triangular_example() {
    return Mat::from_rows({{1.0 / std::sqrt(3.0), 0.0},
                           {1.0 / std::sqrt(5.0), 1.0 / std::sqrt(2.0)}});
}
} // namespace

TEST_CASE("determinant and inverse of a lower-triangular irrational matrix") {
    const Mat h = triangular_example();
    CHECK(det(h) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-14));

    const Mat hi = inv(h);
    const Mat p = hi * h;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(p.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13));

    // Closed forms: inv = [[sqrt3, 0], [-sqrt(6/5), sqrt2]].
    CHECK(hi.at(0, 0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
    CHECK(hi.at(0, 1) == doctest::Approx(0.0));
    CHECK(hi.at(1, 0) == doctest::Approx(-std::sqrt(6.0 / 5.0)).epsilon(1e-13));
    CHECK(hi.at(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));

    const Mat ht = inv_transpose(h);
    CHECK(ht.at(0, 1) == doctest::Approx(-std::sqrt(6.0 / 5.0)).epsilon(1e-13));
    CHECK(ht.at(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("inverse of a singular matrix throws") {
    const Mat z = Mat::from_rows({{1.0, 2.0}, {2.0, 4.0}});
    CHECK_THROWS_AS(inv(z), SingularError);
    CHECK_THROWS_AS(inv_transpose(z), SingularError);
}

TEST_CASE("classification flags") {
    const MatClass id = classify_matrix(Mat::identity(3));
    CHECK(id.is_integer);
    CHECK(id.is_permutation);
    CHECK(id.is_lower_triangular);
    CHECK(id.is_unitriangular);
    CHECK(id.diag_in_unit_interval);

    const MatClass hc = classify_matrix(triangular_example());
    CHECK(hc.is_lower_triangular);
    CHECK(hc.diag_in_unit_interval);
    CHECK_FALSE(hc.is_integer);
    CHECK_FALSE(hc.is_unitriangular);
    CHECK_FALSE(hc.is_permutation);

    // Upper-triangular entry breaks lower-triangularity.
    const MatClass up = classify_matrix(Mat::from_rows({{1.0, 0.5}, {0.0, 1.0}}));
    CHECK_FALSE(up.is_lower_triangular);

    // Diagonal above 1 breaks the unit-interval requirement.
    const MatClass big = classify_matrix(Mat::from_rows({{1.5, 0.0}, {0.0, 0.5}}));
    CHECK(big.is_lower_triangular);
    CHECK_FALSE(big.diag_in_unit_interval);
}

TEST_CASE("permutation matrix acts by column selection") {
    const Mat a = Mat::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    const Mat swapped = a * perm_matrix({1, 0});
    CHECK(swapped.at(0, 0) == 2.0);
    CHECK(swapped.at(0, 1) == 1.0);
    CHECK(swapped.at(1, 0) == 4.0);
    CHECK(swapped.at(1, 1) == 3.0);
}

TEST_CASE("spectral norm of diagonal and rotation matrices") {
    CHECK(spectral_norm(Mat::from_rows({{0.3, 0.0}, {0.0, 0.1}})) ==
          doctest::Approx(0.3).epsilon(1e-9));

    const double c = 0.1 * std::sqrt(3.0) / 2.0;
    const Mat rot = Mat::from_rows({{c, -0.05}, {0.05, c}});
    CHECK(spectral_norm(rot) == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("matrix-vector product") {
    const Mat m = Mat::from_rows({{2.0, 1.0}, {0.0, 3.0}});
    std::array<double, kMaxDim> x{};
    x[0] = 1.0;
    x[1] = -1.0;
    const auto y = mat_vec(m, x);
    CHECK(y[0] == 1.0);
    CHECK(y[1] == -3.0);
}
