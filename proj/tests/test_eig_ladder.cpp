#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "paralattice/constructions.hpp"
#include "paralattice/eig.hpp"
#include "paralattice/gram.hpp"
#include "paralattice/ladder.hpp"

using namespace paralattice;

namespace {
Mat triangular_example() {
    return Mat::from_rows({{1.0 / std::sqrt(3.0), 0.0},
                           {1.0 / std::sqrt(5.0), 1.0 / std::sqrt(2.0)}});
}

FreqSet wobble_window(int radius) {
    FreqSet s;
    s.dim = 1;
    for (long long n = -radius; n <= radius; ++n) {
        s.pts.push_back(static_cast<double>(n) + 0.2 * std::sin(2.7 * static_cast<double>(n)));
        s.idx.push_back(n);
    }
    s.index_radius = radius;
    return s;
}
} // namespace

TEST_CASE("padded grid sizes are 7-smooth and minimal") {
    CHECK(next_fast_size(1) == 1);
    CHECK(next_fast_size(17) == 18);
    CHECK(next_fast_size(227) == 240);
    CHECK(next_fast_size(453) == 480);
    CHECK(next_fast_size(2265) == 2268);
}

TEST_CASE("dense extremes of a known spectrum") {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(10, 10);
    for (int i = 0; i < 10; ++i) g(i, i) = std::complex<double>(i + 1.0, 0.0);
    const auto [lo, hi] = eig_range(g);
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("iterative extremes agree with the dense solver") {
    const FreqSet s = wobble_window(300); // 601 points forces real iteration
    const Eigen::MatrixXcd g = assemble_gram(Mat::identity(1), s);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    const double dense_lo = es.eigenvalues().minCoeff();
    const double dense_hi = es.eigenvalues().maxCoeff();

    const auto apply = [&g](const std::complex<double>* x, std::complex<double>* y) {
        Eigen::Map<const Eigen::VectorXcd> xv(x, g.rows());
        Eigen::Map<Eigen::VectorXcd> yv(y, g.rows());
        yv = g * xv;
    };
    const auto [lo, hi] = lanczos_extreme_eigs(g.rows(), apply);
    CHECK(lo == doctest::Approx(dense_lo).epsilon(1e-7));
    CHECK(hi == doctest::Approx(dense_hi).epsilon(1e-7));
}

TEST_CASE("identity operators trigger clean breakdown handling") {
    const auto apply = [](const std::complex<double>* x, std::complex<double>* y) {
        for (int i = 0; i < 3000; ++i) y[i] = x[i];
    };
    const auto [lo, hi] = lanczos_extreme_eigs(3000, apply);
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("convolution operator reproduces dense Gram products") {
    const Mat a = triangular_example();
    const Mat at = a.transposed();
    const FreqSet s = rounded_dual_construction(a, 8); // 289 integer points
    const Eigen::MatrixXcd g = assemble_gram(a, s);

    std::vector<long long> pts;
    pts.reserve(s.pts.size());
    for (double v : s.pts) pts.push_back(std::llround(v));
    const double adt = std::abs(det(a));
    const auto kernel = [&](const long long* delta) {
        std::complex<double> prod(adt, 0.0);
        for (int r = 0; r < 2; ++r) {
            double u = 0.0;
            for (int c = 0; c < 2; ++c) u += at.at(r, c) * static_cast<double>(delta[c]);
            prod *= gram_phi(u);
        }
        return prod;
    };
    const ConvKernelOperator op(2, pts, kernel);
    REQUIRE(op.size() == s.size());

    Eigen::VectorXcd x(s.size());
    for (std::int64_t i = 0; i < s.size(); ++i)
        x(i) = std::complex<double>(std::cos(0.37 * static_cast<double>(i)),
                                    std::sin(0.11 * static_cast<double>(i)));
    Eigen::VectorXcd y(s.size());
    op.apply(x.data(), y.data());
    const Eigen::VectorXcd ref = g * x;
    CHECK((y - ref).lpNorm<Eigen::Infinity>() < 1e-9 * ref.lpNorm<Eigen::Infinity>());
}

TEST_CASE("ladders are monotone and report their per-rung method") {
    const Mat a = triangular_example();
    const auto truncate = [&a](int n) { return rounded_dual_construction(a, n); };
    const GramLadderReport rep = truncation_ladder(a, truncate, {3, 6, 12});

    REQUIRE(rep.radii.size() == 3);
    CHECK(rep.sizes == std::vector<std::int64_t>{49, 169, 625});
    for (const std::string& m : rep.method) CHECK(m == "dense");
    CHECK(rep.monotone);
    CHECK_FALSE(rep.numerical_failure);
    CHECK(rep.det_abs == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-12));
    for (std::size_t i = 1; i < rep.eig_min.size(); ++i) {
        CHECK(rep.eig_min[i] <= rep.eig_min[i - 1] + kLadderSlack);
        CHECK(rep.eig_max[i] >= rep.eig_max[i - 1] - kLadderSlack);
    }
    for (double v : rep.eig_min) CHECK(v > 0.0);

    CHECK_THROWS_AS(truncation_ladder(a, truncate, {}), OutOfRangeError);
    CHECK_THROWS_AS(truncation_ladder(a, truncate, {5, 5}), OutOfRangeError);
}

TEST_CASE("mid-size rungs switch to the iterative solver") {
    const Mat a = triangular_example();
    const auto truncate = [&a](int n) { return rounded_dual_construction(a, n); };
    const GramLadderReport rep = truncation_ladder(a, truncate, {23});
    REQUIRE(rep.sizes == std::vector<std::int64_t>{2209});
    CHECK(rep.method[0] == "lanczos");
    CHECK(rep.eig_min[0] > 0.0);
    CHECK(rep.eig_max[0] > rep.eig_min[0]);
}
