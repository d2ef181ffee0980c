#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <json.hpp>

#include "monotrend/errors.hpp"
#include "monotrend/inference.hpp"
#include "monotrend/stats.hpp"

using monotrend::CiMethod;
using monotrend::CiStatus;
using monotrend::ConfidenceBand;
using monotrend::ConfidenceInterval;
using monotrend::LookupMode;
using monotrend::QuantileTable;
using monotrend::Series;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Series noisy_trend(std::size_t n, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    Series s;
    s.ys.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.ys[i] = static_cast<double>(i + 1) / static_cast<double>(n) + gauss(rng);
    }
    return s;
}

} // namespace

TEST_CASE("two-point discrepancy inversion recovers the quadratic sublevel set") {
    // ys = (1, 0) pools to the flat fit 1/2, and the profile is
    // 2 (theta - 1/2)^2 for theta in [0, 1]; threshold 0.08 gives [0.3, 0.7].
    const Series s{{1.0, 0.0}};
    const QuantileTable unused = monotrend::embedded_l_table_m1();
    const ConfidenceInterval ci = monotrend::ci_ln_srd(s, 0.6, 0.10, unused, 1.0, 0.08);
    CHECK(ci.status == CiStatus::OK);
    CHECK(ci.lower == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(ci.upper == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(ci.theta_hat == doctest::Approx(0.5));
    CHECK(ci.nuisance.tau2 == 1.0);

    // The distance profile is identical here, so tn-srd matches.
    const ConfidenceInterval ct = monotrend::ci_tn_srd(s, 0.6, 0.10, unused, 1.0, 0.08);
    CHECK(ct.lower == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(ct.upper == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("threshold override hooks: infinite and zero cutoffs") {
    const Series s{{1.0, 0.0}};
    const QuantileTable unused = monotrend::embedded_l_table_m1();

    // An infinite threshold accepts the whole search range.
    const ConfidenceInterval all = monotrend::ci_ln_srd(s, 0.6, 0.10, unused, 1.0, kInf);
    CHECK(all.status == CiStatus::UNBOUNDED_AT_GRID);
    CHECK(all.lower == doctest::Approx(0.0 - 1.0)); // min y - range
    CHECK(all.upper == doctest::Approx(1.0 + 1.0)); // max y + range

    // A zero threshold collapses onto the flat zero set {1/2}.
    const ConfidenceInterval none = monotrend::ci_ln_srd(s, 0.6, 0.10, unused, 1.0, 0.0);
    CHECK(none.status == CiStatus::OK);
    CHECK(none.lower == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(none.upper == doctest::Approx(0.5).epsilon(1e-6));

    CHECK_THROWS_AS((void)monotrend::ci_ln_srd(s, 0.6, 0.10, unused, 0.0, 0.08),
                    monotrend::InvalidNuisance);
    CHECK_THROWS_AS((void)monotrend::ci_ln_srd(s, 0.6, 1.5, unused, 1.0, 0.08),
                    monotrend::InvalidInput);
}

TEST_CASE("inversion consistency: the profile meets the threshold at the endpoints") {
    const Series s = noisy_trend(400, 0.3, 31);
    const double tau2 = 0.09;
    const double q = 1.62;
    const ConfidenceInterval ci =
        monotrend::ci_ln_srd(s, 0.5, 0.10, monotrend::embedded_l_table_m1(), tau2, q);
    REQUIRE(ci.status == CiStatus::OK);
    const monotrend::ProfileEvaluator eval(s, 0.5);
    CHECK(eval.l_at(ci.lower) / tau2 == doctest::Approx(q).epsilon(1e-4));
    CHECK(eval.l_at(ci.upper) / tau2 == doctest::Approx(q).epsilon(1e-4));
    CHECK(ci.lower < ci.theta_hat);
    CHECK(ci.theta_hat < ci.upper);
}

TEST_CASE("interval nesting in the confidence level") {
    const Series s = noisy_trend(400, 0.3, 77);
    const QuantileTable l1 = monotrend::embedded_l_table_m1();
    const ConfidenceInterval wide = monotrend::ci_ln_srd(s, 0.5, 0.05, l1, 0.09);
    const ConfidenceInterval narrow = monotrend::ci_ln_srd(s, 0.5, 0.10, l1, 0.09);
    CHECK(wide.lower <= narrow.lower);
    CHECK(wide.upper >= narrow.upper);
    CHECK(wide.threshold == 2.26);
    CHECK(narrow.threshold == 1.62);
}

TEST_CASE("lrd inversion at hurst one-half reduces to the srd form") {
    const Series s = noisy_trend(300, 0.3, 5);
    const QuantileTable l1 = monotrend::embedded_l_table_m1();
    // e = 0: threshold a^2 q and no sample-size scaling, so any b works
    // and the interval equals the srd one with tau2 = a^2.
    const double a_hat = 0.3;
    const ConfidenceInterval lrd =
        monotrend::ci_ln_lrd(s, 0.5, 0.10, l1, 0.5, a_hat, 7.0, LookupMode::EXACT_H);
    const ConfidenceInterval srd =
        monotrend::ci_ln_srd(s, 0.5, 0.10, l1, a_hat * a_hat);
    CHECK(lrd.lower == doctest::Approx(srd.lower).epsilon(1e-9));
    CHECK(lrd.upper == doctest::Approx(srd.upper).epsilon(1e-9));

    CHECK_THROWS_AS(
        (void)monotrend::ci_ln_lrd(s, 0.5, 0.10, l1, 0.7, 0.3, 0.0, LookupMode::NEAREST_H),
        monotrend::InvalidNuisance);
    CHECK_THROWS_AS(
        (void)monotrend::ci_ln_lrd(s, 0.5, 0.10, l1, 0.7, -1.0, 1.0, LookupMode::NEAREST_H),
        monotrend::InvalidNuisance);
    CHECK_THROWS_AS(
        (void)monotrend::ci_ln_lrd(s, 0.5, 0.10, l1, 0.3, 0.3, 1.0, LookupMode::NEAREST_H),
        monotrend::InvalidInput);
}

TEST_CASE("lrd threshold widens with hurst for fixed nuisances") {
    const Series s = noisy_trend(300, 0.3, 5);
    const QuantileTable l1 = monotrend::embedded_l_table_m1();
    const ConfidenceInterval h7 =
        monotrend::ci_ln_lrd(s, 0.5, 0.10, l1, 0.7, 0.3, 1.0, LookupMode::EXACT_H);
    const ConfidenceInterval h9 =
        monotrend::ci_ln_lrd(s, 0.5, 0.10, l1, 0.9, 0.3, 1.0, LookupMode::EXACT_H);
    // Larger H: larger tabulated quantile and stronger favourable scaling.
    CHECK(h9.upper - h9.lower > h7.upper - h7.lower);
}

TEST_CASE("ratio interval: constraint at a fit jump gives an empty set") {
    // For ys = (0, 1) with t0 = 1/2 the split is the unconstrained fit, so
    // the two profiles coincide for every theta and psi is identically
    // infinite: no grid point falls below any finite threshold.
    const Series s{{0.0, 1.0}};
    const ConfidenceInterval ci = monotrend::ci_psi(
        s, 0.5, 0.10, monotrend::embedded_psi_table(), LookupMode::EXACT_H, 0.5);
    CHECK(ci.status == CiStatus::EMPTY_SET);
    CHECK(std::isnan(ci.lower));
    CHECK(std::isnan(ci.upper));
}

TEST_CASE("ratio interval on a noisy trend behaves like a hull around theta-hat") {
    const Series s = noisy_trend(400, 0.3, 99);
    const ConfidenceInterval ci = monotrend::ci_psi(
        s, 0.5, 0.10, monotrend::embedded_psi_table(), LookupMode::EXACT_H, 0.5);
    REQUIRE(ci.status != CiStatus::EMPTY_SET);
    CHECK(ci.lower < ci.upper);
    CHECK(ci.lower <= ci.theta_hat);
    CHECK(ci.theta_hat <= ci.upper);
    CHECK(ci.threshold == 25.00);

    // Conservative thresholds can only enlarge the sublevel hull.
    const ConfidenceInterval cons = monotrend::ci_psi(
        s, 0.5, 0.10, monotrend::embedded_psi_table(), LookupMode::CONSERVATIVE, 0.5);
    REQUIRE(cons.status != CiStatus::EMPTY_SET);
    CHECK(cons.threshold == 27.05);
    CHECK(cons.lower <= ci.lower + 1e-9);
    CHECK(cons.upper >= ci.upper - 1e-9);

    CHECK_THROWS_AS(
        (void)monotrend::ci_psi(s, 0.5, 0.20, monotrend::embedded_psi_table(),
                                LookupMode::CONSERVATIVE, 0.5),
        monotrend::Unsupported);
}

TEST_CASE("band construction, monotonization, and step conventions") {
    const Series s = noisy_trend(512, 0.2, 12);
    const QuantileTable l1 = monotrend::embedded_l_table_m1();
    const double q = 2.5;
    const ConfidenceBand bd =
        monotrend::band(s, 0.10, 0.2, 0.8, l1, 5, CiMethod::LN_SRD, false, q);
    REQUIRE(bd.t_points.size() == 5);
    CHECK(bd.t_points.front() == doctest::Approx(0.2));
    CHECK(bd.t_points.back() == doctest::Approx(0.8));
    CHECK(bd.per_point_level == doctest::Approx(std::pow(0.9, 1.0 / 5.0)));

    // Envelopes recomputed independently: running max on both sides.
    double run_lo = -kInf, run_hi = -kInf;
    for (std::size_t i = 0; i < 5; ++i) {
        run_lo = std::max(run_lo, bd.lower_raw[i]);
        run_hi = std::max(run_hi, bd.upper_raw[i]);
        CHECK(bd.lower_steps[i] == run_lo);
        CHECK(bd.upper_steps[i] == run_hi);
        CHECK(bd.lower_steps[i] <= bd.upper_steps[i]);
        if (i > 0) {
            CHECK(bd.lower_steps[i] >= bd.lower_steps[i - 1]);
            CHECK(bd.upper_steps[i] >= bd.upper_steps[i - 1]);
        }
    }

    // Step evaluation: lower constant on [t_i, t_{i+1}), upper on (t_i, t_{i+1}].
    const double t1 = bd.t_points[1], t2 = bd.t_points[2];
    CHECK(bd.lower_at(t1) == bd.lower_steps[1]);
    CHECK(bd.lower_at(0.5 * (t1 + t2)) == bd.lower_steps[1]);
    CHECK(bd.upper_at(t2) == bd.upper_steps[2]);
    CHECK(bd.upper_at(0.5 * (t1 + t2)) == bd.upper_steps[2]);
    CHECK(bd.lower_at(bd.t_points.back()) == bd.lower_steps.back());
    CHECK(bd.upper_at(bd.t_points.front()) == bd.upper_steps.front());
    CHECK_THROWS_AS((void)bd.lower_at(0.1), monotrend::OutOfRange);
    CHECK_THROWS_AS((void)bd.upper_at(0.9), monotrend::OutOfRange);

    // Literal variant: running minimum on the lower side contains every
    // per-point interval.
    const ConfidenceBand lit =
        monotrend::band(s, 0.10, 0.2, 0.8, l1, 5, CiMethod::LN_SRD, true, q);
    double run_min = kInf;
    for (std::size_t i = 0; i < 5; ++i) {
        run_min = std::min(run_min, lit.lower_raw[i]);
        CHECK(lit.lower_steps[i] == run_min);
        CHECK(lit.lower_steps[i] <= lit.lower_raw[i]);
        CHECK(lit.upper_steps[i] >= lit.upper_raw[i]);
    }

    CHECK_THROWS_AS(
        (void)monotrend::band(s, 0.10, 0.8, 0.2, l1, 5, CiMethod::LN_SRD, false, q),
        monotrend::InvalidInput);
    CHECK_THROWS_AS(
        (void)monotrend::band(s, 0.10, 0.2, 0.8, l1, 5, CiMethod::PSI, false, q),
        monotrend::Unsupported);
}

TEST_CASE("band default point count and widening with the threshold") {
    const Series s = noisy_trend(1000, 0.2, 4);
    const QuantileTable l1 = monotrend::embedded_l_table_m1();
    const ConfidenceBand bd =
        monotrend::band(s, 0.10, 0.2, 0.8, l1, 0, CiMethod::LN_SRD, false, 2.0);
    CHECK(bd.t_points.size() == 10); // floor(1000^(1/3))

    const ConfidenceBand wide =
        monotrend::band(s, 0.10, 0.2, 0.8, l1, 8, CiMethod::LN_SRD, false, 3.0);
    const ConfidenceBand narrow =
        monotrend::band(s, 0.10, 0.2, 0.8, l1, 8, CiMethod::LN_SRD, false, 1.5);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(wide.lower_raw[i] <= narrow.lower_raw[i]);
        CHECK(wide.upper_raw[i] >= narrow.upper_raw[i]);
    }
}

TEST_CASE("interval and band json renderings") {
    const Series s{{1.0, 0.0}};
    const QuantileTable unused = monotrend::embedded_l_table_m1();
    const ConfidenceInterval ci = monotrend::ci_ln_srd(s, 0.6, 0.10, unused, 1.0, 0.08);
    const nlohmann::json j = nlohmann::json::parse(monotrend::interval_to_json(ci));
    CHECK(j["method"] == "ln-srd");
    CHECK(j["status"] == "ok");
    CHECK(j["level"] == 0.9);
    CHECK(j["lower"].get<double>() == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(j["nuisance"]["tau2"] == 1.0);

    const ConfidenceInterval empty = monotrend::ci_psi(
        Series{{0.0, 1.0}}, 0.5, 0.10, monotrend::embedded_psi_table(),
        LookupMode::EXACT_H, 0.5);
    const nlohmann::json je = nlohmann::json::parse(monotrend::interval_to_json(empty));
    CHECK(je["status"] == "empty-set");
    CHECK(je["lower"].is_null());

    const Series big = noisy_trend(512, 0.2, 12);
    const ConfidenceBand bd =
        monotrend::band(big, 0.10, 0.2, 0.8, unused, 4, CiMethod::LN_SRD, false, 2.0);
    const nlohmann::json jb = nlohmann::json::parse(monotrend::band_to_json(bd));
    CHECK(jb["t_points"].size() == 4);
    CHECK(jb["lower"].size() == 4);
    CHECK(jb["per_point_level"].get<double>() ==
          doctest::Approx(std::pow(0.9, 0.25)));
}
