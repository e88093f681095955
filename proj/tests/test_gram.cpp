#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "paralattice/gram.hpp"
#include "paralattice/lattice.hpp"

using namespace paralattice;

namespace {

Mat triangular_example() {
    return Mat::from_rows({{1.0 / std::sqrt(3.0), 0.0},
                           {1.0 / std::sqrt(5.0), 1.0 / std::sqrt(2.0)}});
}

/// Long-double Simpson quadrature of integral_0^1 e^{2 pi i g u} du.
std::complex<double> simpson_unit_interval(double g, int intervals = 8192) {
    const long double w = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(g);
    long double re = 0.0L, im = 0.0L;
    const long double h = 1.0L / intervals;
    for (int k = 0; k <= intervals; ++k) {
        const long double u = k * h;
        const long double coef = (k == 0 || k == intervals) ? 1.0L : (k % 2 ? 4.0L : 2.0L);
        re += coef * std::cos(w * u);
        im += coef * std::sin(w * u);
    }
    re *= h / 3.0L;
    im *= h / 3.0L;
    return {static_cast<double>(re), static_cast<double>(im)};
}

} // namespace

TEST_CASE("phi at exact integers, the Taylor window, and generic points") {
    CHECK(gram_phi(0.0) == std::complex<double>(1.0, 0.0));
    CHECK(gram_phi(1.0) == std::complex<double>(0.0, 0.0));
    CHECK(gram_phi(-7.0) == std::complex<double>(0.0, 0.0));

    const std::complex<double> half = gram_phi(0.5);
    CHECK(half.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(half.imag() == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-15));

    // Taylor branch vs the analytic formula evaluated in long double.
    for (double u : {1e-9, 5e-9, -3e-9}) {
        const long double pi_l = std::numbers::pi_v<long double>;
        const long double x = pi_l * static_cast<long double>(u);
        const long double s = std::sin(x) / x;
        const std::complex<double> direct(static_cast<double>(std::cos(x) * s),
                                          static_cast<double>(std::sin(x) * s));
        CHECK(std::abs(gram_phi(u) - direct) < 1e-15);
    }
}

TEST_CASE("1-D entries match quadrature") {
    for (double a : {0.5, 1.0}) {
        for (double g : {0.3, 1.7, -2.2}) {
            const Mat m = Mat::from_rows({{a}});
            const double g1[1] = {g};
            const double g2[1] = {0.0};
            // integral_0^a e^{2 pi i g x} dx = a * integral_0^1 e^{2 pi i (ga) u} du
            const std::complex<double> oracle =
                a * simpson_unit_interval(g * a) * std::complex<double>(1.0, 0.0);
            CHECK(std::abs(gram_entry(m, g1, g2) - oracle) < 1e-12);
        }
    }
}

TEST_CASE("2-D entries match factored quadrature") {
    const Mat a = triangular_example();
    const Mat at = a.transposed();
    const double pairs[][4] = {{1.0, 1.0, 0.0, 0.0},
                               {2.0, -1.0, 0.0, 1.0},
                               {0.3, 0.7, -0.4, 0.1}};
    for (const auto& p : pairs) {
        const double g1[2] = {p[0], p[1]};
        const double g2[2] = {p[2], p[3]};
        const double diff[2] = {p[0] - p[2], p[1] - p[3]};
        const double u0 = at.at(0, 0) * diff[0] + at.at(0, 1) * diff[1];
        const double u1 = at.at(1, 0) * diff[0] + at.at(1, 1) * diff[1];
        // Change of variables x = A u plus Fubini: the 2-D integral over
        // A[0,1]^2 factors into 1-D unit-interval integrals.
        const std::complex<double> oracle =
            std::abs(det(a)) * simpson_unit_interval(u0) * simpson_unit_interval(u1);
        CHECK(std::abs(gram_entry(a, g1, g2) - oracle) < 1e-12);
    }
}

TEST_CASE("assembled matrices are exactly Hermitian") {
    FreqSet s;
    s.dim = 2;
    for (double v : {0.0, 0.0, 0.7, -0.3, 1.4, 0.9, -0.6, 2.2}) s.pts.push_back(v);
    const Eigen::MatrixXcd g = assemble_gram(triangular_example(), s);
    REQUIRE(g.rows() == 4);
    CHECK((g - g.adjoint()).norm() == 0.0);
    for (int i = 0; i < 4; ++i) CHECK(g(i, i).imag() == 0.0);
}

TEST_CASE("integer frequencies on the unit box give the bit-exact identity") {
    const FreqSet s = lattice_points(Mat::identity(2), 2);
    const Eigen::MatrixXcd g = assemble_gram(Mat::identity(2), s);
    REQUIRE(g.rows() == 25);
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            CHECK(g(i, j).real() == (i == j ? 1.0 : 0.0));
            CHECK(g(i, j).imag() == 0.0);
        }
}

TEST_CASE("dual lattices are orthogonal, generic sets are not") {
    const Mat a = triangular_example();
    const FreqSet dual = lattice_points(inv_transpose(a), 4);
    const OrthogonalityReport rep = orthogonality_report(a, dual, 1e-9);
    CHECK(rep.orthogonal);
    // A^T M is the identity up to round-off, so off-diagonals collapse to
    // the phi tail of that round-off.
    CHECK(rep.max_offdiag < 1e-12);
    CHECK(rep.max_diag_dev < 1e-12);
    CHECK(rep.pairs > 0);

    FreqSet bad;
    bad.dim = 1;
    bad.pts = {0.0, 0.5};
    const OrthogonalityReport rep2 = orthogonality_report(Mat::identity(1), bad, 1e-9);
    CHECK_FALSE(rep2.orthogonal);
    CHECK(rep2.max_offdiag == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-12));
    CHECK_FALSE(orthogonality_test(Mat::identity(1), bad));
}

TEST_CASE("pairwise assembly refuses oversized sets") {
    FreqSet big;
    big.dim = 1;
    big.pts.resize(5001, 0.0);
    for (std::size_t i = 0; i < big.pts.size(); ++i) big.pts[i] = static_cast<double>(i) * 1.3;
    CHECK_THROWS_AS(assemble_gram(Mat::identity(1), big), TooLargeError);
}
