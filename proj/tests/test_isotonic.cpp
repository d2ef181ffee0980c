#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "monotrend/errors.hpp"
#include "monotrend/isotonic.hpp"
#include "oracles.hpp"

using monotrend::ConstrainedFit;
using monotrend::IsotonicFit;
using monotrend::Series;
using monotrend::SplitFit;

namespace {

Series random_series(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Series s;
    for (std::size_t i = 0; i < n; ++i) {
        s.ys.push_back(0.3 * static_cast<double>(i) / static_cast<double>(n) + normal(rng));
    }
    return s;
}

} // namespace

TEST_CASE("fit_isotonic matches the exhaustive partition minimizer") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> len(2, 6);
    for (int rep = 0; rep < 500; ++rep) {
        const Series s = random_series(rng, len(rng));
        const IsotonicFit fit = monotrend::fit_isotonic(s);
        const std::vector<double> expected = oracle::isotonic_fit(s.ys);
        REQUIRE(fit.fitted.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(std::fabs(fit.fitted[i] - expected[i]) < 1e-10);
        }
    }
}

TEST_CASE("fit_isotonic matches a direct pool-adjacent-violators solver on long input") {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 10; ++rep) {
        const Series s = random_series(rng, 1000);
        const IsotonicFit fit = monotrend::fit_isotonic(s);
        const std::vector<double> expected = oracle::pava(s.ys);
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(std::fabs(fit.fitted[i] - expected[i]) < 1e-9);
        }
    }
}

TEST_CASE("fit structure: blocks partition the index range and levels are block means") {
    std::mt19937_64 rng(5);
    const Series s = random_series(rng, 200);
    const IsotonicFit fit = monotrend::fit_isotonic(s);
    std::size_t expected_start = 0;
    for (const auto& b : fit.blocks) {
        REQUIRE(b.start == expected_start);
        REQUIRE(b.end >= b.start);
        double mean = 0.0;
        for (std::size_t i = b.start; i <= b.end; ++i) {
            mean += s.ys[i];
            CHECK(fit.fitted[i] == b.level);
        }
        mean /= static_cast<double>(b.end - b.start + 1);
        CHECK(b.level == doctest::Approx(mean).epsilon(1e-12));
        expected_start = b.end + 1;
    }
    CHECK(expected_start == s.n());
    // Jumps are exactly the strict increases, i.e. the block boundaries
    // (all levels are distinct almost surely).
    CHECK(fit.jump_indices.size() == fit.blocks.size() - 1);
    for (std::size_t j : fit.jump_indices) {
        CHECK(fit.fitted[j] > fit.fitted[j - 1]);
    }
}

TEST_CASE("constraint_index conventions") {
    CHECK(monotrend::constraint_index(10, 0.5) == 5);
    CHECK(monotrend::constraint_index(10, 0.55) == 5);   // floor
    CHECK(monotrend::constraint_index(1000, 0.007) == 7);
    // A location that is a design point up to representation error snaps up.
    CHECK(monotrend::constraint_index(10000, 0.4667) == 4667);
    CHECK_THROWS_AS((void)monotrend::constraint_index(10, 0.0), monotrend::InvalidInput);
    CHECK_THROWS_AS((void)monotrend::constraint_index(10, 1.0), monotrend::InvalidInput);
}

TEST_CASE("fit_split fits the two segments independently") {
    std::mt19937_64 rng(8);
    const Series s = random_series(rng, 40);
    const SplitFit split = monotrend::fit_split(s, 0.5);
    REQUIRE(split.l == 20);
    const std::vector<double> left(s.ys.begin(), s.ys.begin() + 20);
    const std::vector<double> right(s.ys.begin() + 20, s.ys.end());
    const std::vector<double> exp_left = oracle::pava(left);
    const std::vector<double> exp_right = oracle::pava(right);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(std::fabs(split.left.fitted[i] - exp_left[i]) < 1e-10);
        CHECK(std::fabs(split.right.fitted[i] - exp_right[i]) < 1e-10);
    }
    Series tiny;
    tiny.ys = {1.0, 2.0};
    CHECK_THROWS_AS((void)monotrend::fit_split(tiny, 0.3), monotrend::DegenerateConstraint);
}

TEST_CASE("fit_constrained matches the exhaustive capped minimizer") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::size_t> len(4, 10);
    std::uniform_real_distribution<double> thetas(-1.5, 1.5);
    for (int rep = 0; rep < 300; ++rep) {
        const std::size_t n = len(rng);
        const Series s = random_series(rng, n);
        const double t0 = 0.5;
        const double theta = thetas(rng);
        const ConstrainedFit fit = monotrend::fit_constrained(s, t0, theta);
        const std::size_t l = monotrend::constraint_index(n, t0);
        const std::vector<double> left(s.ys.begin(), s.ys.begin() + l);
        const std::vector<double> right(s.ys.begin() + l, s.ys.end());
        const std::vector<double> exp_left = oracle::isotonic_fit_capped(left, theta, true);
        const std::vector<double> exp_right = oracle::isotonic_fit_capped(right, theta, false);
        for (std::size_t i = 0; i < l; ++i) {
            CHECK(std::fabs(fit.fitted[i] - exp_left[i]) < 1e-10);
        }
        for (std::size_t i = l; i < n; ++i) {
            CHECK(std::fabs(fit.fitted[i] - exp_right[i - l]) < 1e-10);
        }
        // The constrained fit is monotone and passes through the gate.
        for (std::size_t i = 1; i < n; ++i) {
            CHECK(fit.fitted[i] >= fit.fitted[i - 1]);
        }
        CHECK(fit.fitted[l - 1] <= theta);
        CHECK(fit.fitted[l] >= theta);
    }
}

TEST_CASE("evaluate_fit uses the left-continuous step convention") {
    Series s;
    s.ys = {1.0, 2.0, 3.0, 4.0};
    const IsotonicFit fit = monotrend::fit_isotonic(s);
    // t_i = i/4; value on (t_{i-1}, t_i] is fitted[i-1].
    CHECK(monotrend::evaluate_fit(fit, 0.25) == 1.0);
    CHECK(monotrend::evaluate_fit(fit, 0.26) == 2.0);
    CHECK(monotrend::evaluate_fit(fit, 1.0) == 4.0);
    CHECK(monotrend::evaluate_fit(fit, 1e-12) == 1.0);
    CHECK_THROWS_AS((void)monotrend::evaluate_fit(fit, 0.0), monotrend::OutOfRange);
    CHECK_THROWS_AS((void)monotrend::evaluate_fit(fit, 1.5), monotrend::OutOfRange);
}
