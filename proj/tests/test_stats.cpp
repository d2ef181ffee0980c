#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "monotrend/errors.hpp"
#include "monotrend/stats.hpp"
#include "oracles.hpp"

using monotrend::ProfileEvaluator;
using monotrend::Series;
using monotrend::StatProfile;
using monotrend::StatValue;

namespace {

Series random_series(std::mt19937_64& rng, std::size_t n, double slope = 0.5) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Series s;
    for (std::size_t i = 0; i < n; ++i) {
        s.ys.push_back(slope * static_cast<double>(i + 1) / static_cast<double>(n) +
                       normal(rng));
    }
    return s;
}

} // namespace

TEST_CASE("closed-form profile agrees with the definitional sums") {
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<std::size_t> len(6, 60);
    std::uniform_real_distribution<double> thetas(-2.0, 2.0);
    for (int rep = 0; rep < 200; ++rep) {
        const Series s = random_series(rng, len(rng));
        const double theta = thetas(rng);
        const StatValue direct = monotrend::discrepancy(s, 0.5, theta);
        const ProfileEvaluator eval(s, 0.5);
        CHECK(std::fabs(direct.l_raw - eval.l_at(theta)) < 1e-9);
        CHECK(std::fabs(direct.t_raw - eval.t_at(theta)) < 1e-9);
    }
}

TEST_CASE("statistic identities on random instances") {
    std::mt19937_64 rng(808);
    std::uniform_int_distribution<std::size_t> len(6, 80);
    std::uniform_real_distribution<double> locs(0.15, 0.85);
    std::uniform_real_distribution<double> thetas(-2.0, 2.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const Series s = random_series(rng, len(rng));
        const double t0 = locs(rng);
        const ProfileEvaluator eval(s, t0);

        // L >= T everywhere.
        const double theta = thetas(rng);
        CHECK(eval.l_at(theta) >= eval.t_at(theta) - 1e-12);

        // Both vanish at the unconstrained value.
        CHECK(std::fabs(eval.l_at(eval.theta_hat())) < 1e-12);
        CHECK(std::fabs(eval.t_at(eval.theta_hat())) < 1e-12);
    }
}

TEST_CASE("profiles are U-shaped: at most one sign change of the increments") {
    std::mt19937_64 rng(909);
    std::uniform_int_distribution<std::size_t> len(8, 60);
    for (int rep = 0; rep < 200; ++rep) {
        const Series s = random_series(rng, len(rng));
        std::vector<double> grid;
        for (int g = 0; g <= 200; ++g) {
            grid.push_back(-3.0 + 6.0 * g / 200.0);
        }
        const StatProfile prof = monotrend::profile(s, 0.5, grid);
        int l_changes = 0, t_changes = 0;
        int l_dir = -1, t_dir = -1; // expect decreasing first
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const double dl = prof.values[i].l_raw - prof.values[i - 1].l_raw;
            const double dt = prof.values[i].t_raw - prof.values[i - 1].t_raw;
            if (l_dir < 0 && dl > 1e-12) { l_dir = 1; ++l_changes; }
            if (l_dir > 0) CHECK(dl >= -1e-12);
            if (t_dir < 0 && dt > 1e-12) { t_dir = 1; ++t_changes; }
            if (t_dir > 0) CHECK(dt >= -1e-12);
        }
        CHECK(l_changes <= 1);
        CHECK(t_changes <= 1);
    }
}

TEST_CASE("at a jump point of the fit, L and T coincide for every theta") {
    // When t0 falls where the unconstrained fit jumps, no split-fit level
    // lies strictly between theta and the fit value on the relevant side,
    // so the two statistics agree identically.
    std::mt19937_64 rng(1111);
    std::uniform_real_distribution<double> thetas(-3.0, 3.0);
    int found = 0;
    for (int rep = 0; rep < 2000 && found < 200; ++rep) {
        const Series s = random_series(rng, 30, 4.0);
        const monotrend::IsotonicFit fit = monotrend::fit_isotonic(s);
        if (fit.jump_indices.empty()) continue;
        // Place t0 so that the constraint index lands on a jump: the fit
        // jumps between observations j and j+1 (0-based), i.e. l = j+1.
        const std::size_t j = fit.jump_indices[rep % fit.jump_indices.size()];
        const double t0 = (static_cast<double>(j)) / static_cast<double>(s.n());
        if (!(t0 > 0.0 && t0 < 1.0)) continue;
        ++found;
        const ProfileEvaluator eval(s, t0);
        for (int g = 0; g < 40; ++g) {
            const double theta = thetas(rng);
            CHECK(std::fabs(eval.l_at(theta) - eval.t_at(theta)) < 1e-10);
        }
    }
    CHECK(found >= 100);
}

TEST_CASE("ratio conventions of make_stat_value") {
    const StatValue tie = monotrend::make_stat_value(0.0, 0.0);
    CHECK(tie.r == 1.0);
    CHECK(tie.psi_infinite);
    CHECK(std::isinf(tie.psi));

    const StatValue clamp = monotrend::make_stat_value(1.0 + 1e-16, 1.0);
    CHECK(clamp.psi_infinite);

    const StatValue regular = monotrend::make_stat_value(3.0, 2.0);
    CHECK(regular.r == doctest::Approx(1.5));
    CHECK(regular.psi == doctest::Approx(-std::log(0.5)));
    CHECK(!regular.psi_infinite);
}

TEST_CASE("profile rejects bad grids") {
    std::mt19937_64 rng(3);
    const Series s = random_series(rng, 10);
    CHECK_THROWS_AS((void)monotrend::profile(s, 0.5, {}), monotrend::InvalidInput);
    CHECK_THROWS_AS((void)monotrend::profile(s, 0.5, {1.0, 1.0}), monotrend::InvalidInput);
}
