#include <doctest.h>

#include <cmath>
#include <limits>

#include "paralattice/bounds.hpp"

using namespace paralattice;

TEST_CASE("B(L) against frozen reference values") {
    // 1 - cos(pi/5) + sin(pi/5) with cos(pi/5) = (1+sqrt5)/4.
    CHECK(kadec_B(0.2) == doctest::Approx(0.77876825791752570507).epsilon(1e-15));
    CHECK(kadec_B(0.0) == doctest::Approx(0.0));
    CHECK(kadec_B(0.25) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("quarter-condition bounds from the frozen B value") {
    const double B = 0.77876825791752570507;
    const auto [b, cert] = kadec_bounds(0.2);
    CHECK(b == doctest::Approx(B).epsilon(1e-15));
    CHECK(cert.lower == doctest::Approx((1.0 - B) * (1.0 - B)).epsilon(1e-14));
    CHECK(cert.upper == doctest::Approx((1.0 + B) * (1.0 + B)).epsilon(1e-14));
    CHECK(cert.log_lower == doctest::Approx(2.0 * std::log(1.0 - B)).epsilon(1e-12));
    CHECK(cert.has_upper);
    CHECK_FALSE(cert.underflow);

    CHECK_THROWS_AS(kadec_bounds(0.25), OutOfRangeError);
    CHECK_THROWS_AS(kadec_bounds(-0.01), OutOfRangeError);
}

TEST_CASE("tensor bounds multiply per-factor bounds") {
    const auto single = kadec_bounds(0.2).second;
    const BoundCert two = tensor_bounds({0.2, 0.2});
    CHECK(two.lower == doctest::Approx(single.lower * single.lower).epsilon(1e-13));
    CHECK(two.upper == doctest::Approx(single.upper * single.upper).epsilon(1e-13));
    CHECK_THROWS_AS(tensor_bounds({}), OutOfRangeError);
    CHECK_THROWS_AS(tensor_bounds({0.3}), OutOfRangeError);
}

TEST_CASE("explicit lower-bound constant in log space") {
    // Canonical parameters: Bt = 3.5, Pt = 32, dt = 1/8; the first term
    // dominates with magnitude about exp(122.9).
    const double log_a = lindner_log_lower_bound(0.0, 1.0, 0.0, 1);
    CHECK(std::isfinite(log_a));
    CHECK(log_a < -1e53);
    CHECK(log_a > -1e54);

    // Monotone decrease in the perturbation size.
    const double a0 = lindner_log_lower_bound(0.0, 1.0, 0.0, 1);
    const double a1 = lindner_log_lower_bound(0.1, 1.0, 0.0, 1);
    const double a2 = lindner_log_lower_bound(0.2, 1.0, 0.0, 1);
    CHECK(a0 > a1);
    CHECK(a1 > a2);
    CHECK(std::isfinite(a2));

    // Far past the double exponent range the sentinel takes over.
    const double deep = lindner_log_lower_bound(2.0, 1.0, 0.0, 1);
    CHECK(deep == -std::numeric_limits<double>::infinity());

    CHECK_THROWS_AS(lindner_log_lower_bound(0.0, 0.0, 0.0, 1), OutOfRangeError);
    CHECK_THROWS_AS(lindner_log_lower_bound(0.0, 1.0, 0.3, 1), OutOfRangeError);
    CHECK_THROWS_AS(lindner_log_lower_bound(0.0, 1.0, 0.0, 0), OutOfRangeError);
    CHECK_THROWS_AS(lindner_log_lower_bound(0.0, 300.0, 0.0, 1), OutOfRangeError);

    const BoundCert cert = lindner_cert(0.0, 1.0, 0.0, 1);
    CHECK(cert.underflow);
    CHECK_FALSE(cert.has_upper);
    CHECK(cert.lower == 0.0);
    CHECK(cert.log_lower == doctest::Approx(log_a));
}

TEST_CASE("bound transforms") {
    BoundCert cert;
    cert.lower = 0.3;
    cert.upper = 2.5;
    cert.log_lower = std::log(0.3);
    cert.source = "test";

    const BoundCert td = transform_bounds(cert, BoundTransform::TranslateDomain);
    CHECK(td.lower == cert.lower);
    CHECK(td.upper == cert.upper);

    const BoundCert tf = transform_bounds(cert, BoundTransform::TranslateFrequency);
    CHECK(tf.log_lower == cert.log_lower);

    const Mat two = Mat::from_rows({{2.0, 0.0}, {0.0, 1.0}});
    const BoundCert half = transform_bounds(cert, BoundTransform::LinearMap, &two);
    CHECK(half.lower == 0.15); // det = 2 halves exactly
    CHECK(half.upper == 1.25);

    CHECK_THROWS_AS(transform_bounds(cert, BoundTransform::LinearMap, nullptr), OutOfRangeError);
    const Mat sing = Mat::from_rows({{1.0, 1.0}, {1.0, 1.0}});
    CHECK_THROWS_AS(transform_bounds(cert, BoundTransform::LinearMap, &sing), SingularError);
}
