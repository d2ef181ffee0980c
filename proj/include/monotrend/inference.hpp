#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "monotrend/isotonic.hpp"
#include "monotrend/limits.hpp"

namespace monotrend {

/// Interval construction used.
enum class CiMethod { LN_SRD, TN_SRD, LN_LRD, PSI };

/// Outcome flavor of an inversion.
enum class CiStatus {
    OK,                ///< both endpoints located by bisection
    UNBOUNDED_AT_GRID, ///< the sublevel set reached the search boundary
    EMPTY_SET          ///< no point of the grid fell below the threshold
};

std::string to_string(CiMethod method);
std::string to_string(CiStatus status);

/// Nuisance quantities that entered a construction (NaN when unused).
struct Nuisance {
    double tau2 = std::numeric_limits<double>::quiet_NaN();
    double hurst = std::numeric_limits<double>::quiet_NaN();
    double a_hat = std::numeric_limits<double>::quiet_NaN();
    double b_hat = std::numeric_limits<double>::quiet_NaN();
};

struct ConfidenceInterval {
    double lower = std::numeric_limits<double>::quiet_NaN();
    double upper = std::numeric_limits<double>::quiet_NaN();
    double level;        ///< nominal 1 - alpha
    CiMethod method;
    CiStatus status = CiStatus::OK;
    Nuisance nuisance;
    double threshold;    ///< statistic cutoff actually used
    double theta_hat;    ///< unconstrained fit value at t0 (always covered)
};

/// Conservative simultaneous band built from k per-point intervals.
struct ConfidenceBand {
    std::vector<double> t_points;       ///< k equispaced locations in [a,b]
    std::vector<double> lower_raw, upper_raw;     ///< per-point CI bounds
    std::vector<double> lower_steps, upper_steps; ///< monotone envelopes
    double level;            ///< nominal simultaneous 1 - alpha
    double per_point_level;  ///< (1 - alpha)^{1/k}
    Nuisance nuisance;

    /// Step evaluation: the lower bound is constant on [t_i, t_{i+1}) and
    /// the upper on (t_i, t_{i+1}]; outside [t_1, t_k] -> OutOfRange.
    double lower_at(double t) const;
    double upper_at(double t) const;
};

constexpr double kNoOverride = std::numeric_limits<double>::quiet_NaN();

/// Interval for m(t0) by inverting the scaled discrepancy profile
/// L(theta)/tau2 against q = table quantile at 1 - alpha (SRD column).
/// Endpoints are bracketed on [min y - range, max y + range] and bisected
/// to 1e-8 of the search width; a sublevel set touching the boundary is
/// flagged UNBOUNDED_AT_GRID.  q_override (a finite number or +infinity)
/// replaces the table lookup, for tests and pre-simulated quantiles.
ConfidenceInterval ci_ln_srd(const Series& series, double t0, double alpha,
                             const QuantileTable& table, double tau2,
                             double q_override = kNoOverride);

/// Same inversion applied to the distance profile T(theta)/tau2.
ConfidenceInterval ci_tn_srd(const Series& series, double t0, double alpha,
                             const QuantileTable& table, double tau2,
                             double q_override = kNoOverride);

/// LRD interval: inverts n^{-e} L(theta) <= a^2 (a/b)^e q with
/// e = (2H-1)/(2-H), b = m'(t0)/2.  Throws InvalidNuisance for
/// b_hat <= 0 (degenerate derivative estimate) or a_hat <= 0.
ConfidenceInterval ci_ln_lrd(const Series& series, double t0, double alpha,
                             const QuantileTable& table, double hurst, double a_hat,
                             double b_hat, LookupMode mode = LookupMode::NEAREST_H,
                             double q_override = kNoOverride);

/// Ratio-statistic interval: scans psi(theta) over a 2000-point grid on
/// search range [lo, hi] (default: data range inflated by 50%), takes the
/// extreme grid points with psi < q, and refines both crossings by
/// bisection.  An empty sublevel set returns EMPTY_SET (a documented
/// outcome, e.g. when t0 sits at a jump of the fit), not an error.
/// In CONSERVATIVE mode only alpha in {0.05, 0.10} is accepted.
ConfidenceInterval ci_psi(const Series& series, double t0, double alpha,
                          const QuantileTable& table, LookupMode mode, double hurst = 0.5,
                          double search_lo = kNoOverride, double search_hi = kNoOverride,
                          double q_override = kNoOverride);

/// Conservative band on [a,b]: k equispaced per-point intervals at level
/// (1-alpha)^{1/k} (default method LN_SRD, TN_SRD also supported) with a
/// single shared tau2-hat estimated from the fit residuals, monotonized
/// into non-decreasing envelopes.  The lower envelope uses a running
/// maximum by default (valid for a monotone trend under simultaneous
/// coverage); set literal_lower_min for the non-increasing running-
/// minimum variant.  k = 0 selects floor(n^{1/3}).
ConfidenceBand band(const Series& series, double alpha, double a, double b,
                    const QuantileTable& table, std::size_t k = 0,
                    CiMethod per_point_method = CiMethod::LN_SRD,
                    bool literal_lower_min = false, double q_override = kNoOverride,
                    double tau2_override = kNoOverride);

/// JSON renderings: {method, level, lower, upper, status, nuisance,
/// threshold, theta_hat} and the band analogue with arrays.
std::string interval_to_json(const ConfidenceInterval& ci);
std::string band_to_json(const ConfidenceBand& band);

} // namespace monotrend
