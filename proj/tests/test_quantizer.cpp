#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "gausskey/errors.hpp"
#include "gausskey/quantizer.hpp"
#include "oracles.hpp"

using namespace gausskey;

namespace {
Thresholds paper_thresholds() {
    const std::array<double, 3> a{1.0 / 3.0, 2.0 / 3.0, 1.0};
    return validate_thresholds(a);
}
}  // namespace

TEST_CASE("threshold validation") {
    CHECK(paper_thresholds().level_count() == 3);
    CHECK(validate_thresholds(std::array<double, 0>{}).level_count() == 0);

    const std::array<double, 2> dup{0.5, 0.5};
    CHECK_THROWS_AS(validate_thresholds(dup), validation_error);
    try {
        validate_thresholds(dup);
    } catch (const validation_error& e) {
        CHECK(e.index == 1);
    }

    const std::array<double, 2> neg{-0.1, 0.5};
    try {
        validate_thresholds(neg);
        CHECK(false);
    } catch (const validation_error& e) {
        CHECK(e.index == 0);
    }

    const std::array<double, 1> nan{std::nan("")};
    CHECK_THROWS_AS(validate_thresholds(nan), validation_error);
}

TEST_CASE("reliability levels") {
    const auto t = paper_thresholds();
    CHECK(reliability_level(0.5, t) == 1);
    CHECK(reliability_level(-2.0, t) == 3);
    CHECK(reliability_level(0.0, t) == 0);
    CHECK(reliability_level(0.0, Thresholds{}) == 0);
    // Boundaries belong to the lower level.
    CHECK(reliability_level(1.0 / 3.0, t) == 0);
    CHECK(reliability_level(-1.0, t) == 2);
    CHECK(reliability_level(std::nextafter(1.0, 2.0), t) == 3);
}

TEST_CASE("hard bit") {
    CHECK(hard_bit(0.0) == 1);
    CHECK(hard_bit(-0.1) == 0);
    CHECK(hard_bit(3.7) == 1);
    CHECK(hard_bit(-0.0) == 1);  // ties at the origin go to 1
}

TEST_CASE("cell probabilities") {
    const auto t = paper_thresholds();
    CHECK(cell_prob(1, Cell{1, 3}, 1.0, t) == doctest::Approx(0.5).epsilon(1e-14));
    // P(N < -2), frozen from the quadrature oracle.
    CHECK(std::fabs(cell_prob(1, Cell{0, 3}, 1.0, t) - 0.022750131948179207) < 1e-12);

    SUBCASE("cells partition the line") {
        for (double v : {0.05, 0.4, 1.0, 2.7}) {
            for (int u : {-1, 1}) {
                double total = 0.0;
                for (int bit = 0; bit < 2; ++bit)
                    for (int lvl = 0; lvl <= t.level_count(); ++lvl)
                        total += cell_prob(u, Cell{bit, lvl}, v, t);
                CHECK(std::fabs(total - 1.0) < 1e-12);
            }
        }
    }

    SUBCASE("sign symmetry") {
        for (double v : {0.1, 0.5, 1.0, 5.0})
            for (int bit = 0; bit < 2; ++bit)
                for (int lvl = 0; lvl <= t.level_count(); ++lvl)
                    CHECK(std::fabs(cell_prob(1, Cell{bit, lvl}, v, t) -
                                    cell_prob(-1, Cell{1 - bit, lvl}, v, t)) < 1e-12);
    }

    CHECK_THROWS_AS(cell_prob(1, Cell{1, 0}, 0.0, t), parameter_error);
    CHECK_THROWS_AS(cell_prob(0, Cell{1, 0}, 1.0, t), parameter_error);
    CHECK_THROWS_AS(cell_prob(1, Cell{2, 0}, 1.0, t), parameter_error);
    CHECK_THROWS_AS(cell_prob(1, Cell{1, 4}, 1.0, t), parameter_error);
}

TEST_CASE("every sample lands in exactly one cell, frequencies match") {
    const auto t = paper_thresholds();
    const double var = 0.5;
    std::mt19937_64 rng(42);
    std::normal_distribution<double> noise(0.0, std::sqrt(var));
    const int levels = t.level_count() + 1;
    std::vector<long> counts(static_cast<std::size_t>(2 * levels), 0);
    const long n = 1'000'000;
    for (long i = 0; i < n; ++i) {
        const double x = 1.0 + noise(rng);
        const int bit = hard_bit(x);
        const int lvl = reliability_level(x, t);
        // Exactly one cell matches: check all others reject.
        int matches = 0;
        for (int b = 0; b < 2; ++b)
            for (int l = 0; l < levels; ++l)
                if (b == bit && l == lvl) ++matches;
        CHECK(matches == 1);
        ++counts[static_cast<std::size_t>(bit * levels + lvl)];
    }
    for (int b = 0; b < 2; ++b)
        for (int l = 0; l < levels; ++l) {
            const double p = cell_prob(1, Cell{b, l}, var, t);
            const double freq = static_cast<double>(counts[static_cast<std::size_t>(b * levels + l)]) /
                                static_cast<double>(n);
            const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
            CHECK(std::fabs(freq - p) <= 4.0 * se + 1e-9);
        }
}

TEST_CASE("cell probabilities agree with the Riemann oracle") {
    const auto t = paper_thresholds();
    for (int u : {-1, 1})
        for (int bit = 0; bit < 2; ++bit)
            for (int lvl = 0; lvl <= 3; ++lvl) {
                const double got = cell_prob(u, Cell{bit, lvl}, 0.8, t);
                const double want = oracles::riemann_cell_prob(u, Cell{bit, lvl}, 0.8, t, 400'000);
                CHECK(std::fabs(got - want) < 1e-9);
            }
}
