#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "gausskey/errors.hpp"
#include "gausskey/model.hpp"
#include "oracles.hpp"

using namespace gausskey;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("snr/nnr conversion") {
    auto p = snr_nnr_to_params(0.0, 1.0);
    CHECK(p.v_a == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.v_b == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.v_e == doctest::Approx(1.0).epsilon(1e-15));

    p = snr_nnr_to_params(10.0, 1.0);
    CHECK(p.v_a == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(p.v_e == doctest::Approx(0.1).epsilon(1e-14));

    // 10^(-0.5), frozen from an independent high-precision evaluation.
    p = snr_nnr_to_params(5.0, 10.0);
    CHECK(p.v_a == doctest::Approx(0.31622776601683794).epsilon(1e-14));
    CHECK(p.v_b == doctest::Approx(0.31622776601683794).epsilon(1e-14));
    CHECK(p.v_e == doctest::Approx(3.1622776601683794).epsilon(1e-14));

    CHECK_THROWS_AS(snr_nnr_to_params(5.0, 0.0), parameter_error);
    CHECK_THROWS_AS(snr_nnr_to_params(5.0, -1.0), parameter_error);
    CHECK_THROWS_AS(snr_nnr_to_params(kInf, 1.0), parameter_error);
    CHECK_THROWS_AS(snr_nnr_to_params(std::nan(""), 1.0), parameter_error);
}

TEST_CASE("snr round-trips through the variance") {
    for (double snr_db : {-13.0, -2.5, 0.0, 1.0, 4.75, 7.0, 18.0, 30.0}) {
        const auto p = snr_nnr_to_params(snr_db, 2.0);
        CHECK(std::fabs(10.0 * std::log10(1.0 / p.v_a) - snr_db) < 1e-9);
    }
}

TEST_CASE("gaussian cdf basics") {
    CHECK(gaussian_cdf(0.0, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(gaussian_cdf(kInf, 0.0, 1.0) == 1.0);
    CHECK(gaussian_cdf(-kInf, 0.0, 1.0) == 0.0);
    // Phi(-2), frozen from the quadrature oracle below.
    CHECK(std::fabs(gaussian_cdf(-2.0, 0.0, 1.0) - 0.022750131948179207) < 1e-12);
    CHECK_THROWS_AS(gaussian_cdf(0.0, 0.0, 0.0), parameter_error);
    CHECK_THROWS_AS(gaussian_cdf(0.0, 0.0, -2.0), parameter_error);
    CHECK_THROWS_AS(gaussian_cdf(std::nan(""), 0.0, 1.0), parameter_error);
}

TEST_CASE("gaussian cdf against the quadrature oracle") {
    for (double mean : {-1.0, 0.0, 0.7}) {
        for (double var : {0.1, 1.0, 3.0}) {
            for (double x = -4.0; x <= 4.01; x += 0.5) {
                const double got = gaussian_cdf(x, mean, var);
                const double want = oracles::gaussian_cdf_quad(x, mean, var);
                CHECK(std::fabs(got - want) < 1e-12);
            }
        }
    }
}

TEST_CASE("gaussian cdf is monotone and centered") {
    for (double var : {0.05, 0.5, 1.0, 4.0}) {
        CHECK(gaussian_cdf(1.3, 1.3, var) == doctest::Approx(0.5).epsilon(1e-14));
        double prev = 0.0;
        for (double x = -6.0; x <= 6.01; x += 0.25) {
            const double c = gaussian_cdf(x, 0.0, var);
            CHECK(c >= prev);
            prev = c;
        }
    }
}

TEST_CASE("erfc values and reflection") {
    CHECK(gausskey::erfc(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gausskey::erfc(40.0) == doctest::Approx(0.0).scale(1).epsilon(1e-15));
    // erfc(1), frozen from the quadrature oracle.
    CHECK(std::fabs(gausskey::erfc(1.0) - 0.15729920705028513) < 1e-12);
    for (double z = -5.0; z <= 5.01; z += 0.25)
        CHECK(std::fabs(gausskey::erfc(-z) - (2.0 - gausskey::erfc(z))) < 1e-12);
    for (double z : {-3.0, -1.2, 0.4, 2.8})
        CHECK(std::fabs(gausskey::erfc(z) - oracles::erfc_quad(z)) < 1e-12);
    CHECK_THROWS_AS(gausskey::erfc(std::nan("")), parameter_error);
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    // h(0.18), frozen from a high-precision evaluation.
    CHECK(std::fabs(binary_entropy(0.18) - 0.6800770457282798) < 1e-12);
    for (int i = 0; i <= 1000; ++i) {
        const double p = static_cast<double>(i) / 1000.0;
        CHECK(std::fabs(binary_entropy(p) - binary_entropy(1.0 - p)) < 1e-15);
        CHECK(binary_entropy(p) >= 0.0);
        CHECK(binary_entropy(p) <= 1.0);
    }
    CHECK_THROWS_AS(binary_entropy(-0.01), parameter_error);
    CHECK_THROWS_AS(binary_entropy(1.01), parameter_error);
}
