#include "monotrend/inference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <json.hpp>

#include "monotrend/errors.hpp"
#include "monotrend/estimators.hpp"
#include "monotrend/stats.hpp"

namespace monotrend {

namespace {

struct SearchRange {
    double lo;
    double hi;
    double tol;
};

SearchRange data_search_range(const Series& series, double inflation) {
    const auto [mn_it, mx_it] = std::minmax_element(series.ys.begin(), series.ys.end());
    double range = *mx_it - *mn_it;
    if (!(range > 0.0)) range = 1.0;
    SearchRange r;
    r.lo = *mn_it - inflation * range;
    r.hi = *mx_it + inflation * range;
    r.tol = 1e-8 * (r.hi - r.lo);
    return r;
}

/// Bisect for the boundary of {theta : inside(theta)} between an outside
/// point and an inside point; returns the final midpoint.
double bisect_boundary(double outside, double inside,
                       const std::function<bool(double)>& is_inside, double tol) {
    while (std::abs(inside - outside) > tol) {
        const double mid = 0.5 * (inside + outside);
        if (is_inside(mid)) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    return 0.5 * (inside + outside);
}

/// Shared U-shaped-profile inversion: the sublevel set of a profile that
/// vanishes at theta_hat and grows monotonically away from it.
ConfidenceInterval invert_profile(const Series& series, double t0, double alpha,
                                  CiMethod method, double threshold,
                                  const std::function<double(double)>& profile_value) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidInput("alpha must lie in (0,1)");
    }
    if (!(threshold >= 0.0)) {
        throw InvalidInput("non-negative statistic threshold required");
    }
    const SearchRange range = data_search_range(series, 1.0);
    const ProfileEvaluator eval(series, t0);
    const auto inside = [&](double theta) { return profile_value(theta) <= threshold; };

    ConfidenceInterval ci;
    ci.level = 1.0 - alpha;
    ci.method = method;
    ci.threshold = threshold;
    ci.theta_hat = eval.theta_hat();

    if (inside(range.lo)) {
        ci.lower = range.lo;
        ci.status = CiStatus::UNBOUNDED_AT_GRID;
    } else {
        ci.lower = bisect_boundary(range.lo, ci.theta_hat, inside, range.tol);
    }
    if (inside(range.hi)) {
        ci.upper = range.hi;
        ci.status = CiStatus::UNBOUNDED_AT_GRID;
    } else {
        ci.upper = bisect_boundary(range.hi, ci.theta_hat, inside, range.tol);
    }
    return ci;
}

double srd_threshold(const QuantileTable& table, double alpha, double q_override) {
    if (!std::isnan(q_override)) return q_override;
    return lookup(table, 0.5, 1.0 - alpha, LookupMode::EXACT_H);
}

nlohmann::json nuisance_json(const Nuisance& nu) {
    nlohmann::json j = nlohmann::json::object();
    const auto put = [&j](const char* key, double v) {
        if (!std::isnan(v)) j[key] = v;
    };
    put("tau2", nu.tau2);
    put("hurst", nu.hurst);
    put("a_hat", nu.a_hat);
    put("b_hat", nu.b_hat);
    return j;
}

nlohmann::json finite_or_string(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

} // namespace

std::string to_string(CiMethod method) {
    switch (method) {
        case CiMethod::LN_SRD: return "ln-srd";
        case CiMethod::TN_SRD: return "tn-srd";
        case CiMethod::LN_LRD: return "ln-lrd";
        case CiMethod::PSI: return "psi";
    }
    throw InvalidInput("unknown interval method");
}

std::string to_string(CiStatus status) {
    switch (status) {
        case CiStatus::OK: return "ok";
        case CiStatus::UNBOUNDED_AT_GRID: return "unbounded-at-grid";
        case CiStatus::EMPTY_SET: return "empty-set";
    }
    throw InvalidInput("unknown interval status");
}

ConfidenceInterval ci_ln_srd(const Series& series, double t0, double alpha,
                             const QuantileTable& table, double tau2, double q_override) {
    if (!(tau2 > 0.0) || !std::isfinite(tau2)) {
        throw InvalidNuisance("tau2 must be positive and finite");
    }
    const double q = srd_threshold(table, alpha, q_override);
    const ProfileEvaluator eval(series, t0);
    ConfidenceInterval ci = invert_profile(
        series, t0, alpha, CiMethod::LN_SRD, q,
        [&eval, tau2](double theta) { return eval.l_at(theta) / tau2; });
    ci.nuisance.tau2 = tau2;
    return ci;
}

ConfidenceInterval ci_tn_srd(const Series& series, double t0, double alpha,
                             const QuantileTable& table, double tau2, double q_override) {
    if (!(tau2 > 0.0) || !std::isfinite(tau2)) {
        throw InvalidNuisance("tau2 must be positive and finite");
    }
    const double q = srd_threshold(table, alpha, q_override);
    const ProfileEvaluator eval(series, t0);
    ConfidenceInterval ci = invert_profile(
        series, t0, alpha, CiMethod::TN_SRD, q,
        [&eval, tau2](double theta) { return eval.t_at(theta) / tau2; });
    ci.nuisance.tau2 = tau2;
    return ci;
}

ConfidenceInterval ci_ln_lrd(const Series& series, double t0, double alpha,
                             const QuantileTable& table, double hurst, double a_hat,
                             double b_hat, LookupMode mode, double q_override) {
    if (!(hurst >= 0.5 && hurst < 1.0)) {
        throw InvalidInput("hurst must lie in [0.5, 1)");
    }
    if (!(b_hat > 0.0)) {
        throw InvalidNuisance("non-positive derivative-based slope estimate");
    }
    if (!(a_hat > 0.0)) {
        throw InvalidNuisance("non-positive scale estimate");
    }
    const double q = std::isnan(q_override) ? lookup(table, hurst, 1.0 - alpha, mode)
                                            : q_override;
    const double e = (2.0 * hurst - 1.0) / (2.0 - hurst);
    const double threshold = a_hat * a_hat * std::pow(a_hat / b_hat, e) * q;
    const double scale = std::pow(static_cast<double>(series.n()), -e);
    const ProfileEvaluator eval(series, t0);
    ConfidenceInterval ci = invert_profile(
        series, t0, alpha, CiMethod::LN_LRD, threshold,
        [&eval, scale](double theta) { return scale * eval.l_at(theta); });
    ci.nuisance.hurst = hurst;
    ci.nuisance.a_hat = a_hat;
    ci.nuisance.b_hat = b_hat;
    return ci;
}

ConfidenceInterval ci_psi(const Series& series, double t0, double alpha,
                          const QuantileTable& table, LookupMode mode, double hurst,
                          double search_lo, double search_hi, double q_override) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw InvalidInput("alpha must lie in (0,1)");
    }
    if (mode == LookupMode::CONSERVATIVE &&
        std::abs(alpha - 0.05) > 1e-12 && std::abs(alpha - 0.10) > 1e-12) {
        throw Unsupported("conservative psi intervals support alpha in {0.05, 0.10} only");
    }
    const double q = std::isnan(q_override) ? lookup(table, hurst, 1.0 - alpha, mode)
                                            : q_override;

    SearchRange range = data_search_range(series, 0.25);
    if (!std::isnan(search_lo)) range.lo = search_lo;
    if (!std::isnan(search_hi)) range.hi = search_hi;
    if (!(range.lo < range.hi)) throw InvalidInput("empty psi search range");
    range.tol = 1e-8 * (range.hi - range.lo);

    const ProfileEvaluator eval(series, t0);
    const auto inside = [&eval, q](double theta) { return eval.at(theta).psi < q; };

    constexpr std::size_t kGrid = 2000;
    std::size_t first = kGrid, last = kGrid;
    std::vector<double> grid(kGrid);
    for (std::size_t i = 0; i < kGrid; ++i) {
        grid[i] = range.lo + (range.hi - range.lo) * static_cast<double>(i) /
                                 static_cast<double>(kGrid - 1);
        if (inside(grid[i])) {
            if (first == kGrid) first = i;
            last = i;
        }
    }

    ConfidenceInterval ci;
    ci.level = 1.0 - alpha;
    ci.method = CiMethod::PSI;
    ci.threshold = q;
    ci.theta_hat = eval.theta_hat();
    ci.nuisance.hurst = hurst;

    if (first == kGrid) {
        ci.status = CiStatus::EMPTY_SET;
        return ci;
    }
    if (first == 0) {
        ci.lower = grid.front();
        ci.status = CiStatus::UNBOUNDED_AT_GRID;
    } else {
        ci.lower = bisect_boundary(grid[first - 1], grid[first], inside, range.tol);
    }
    if (last == kGrid - 1) {
        ci.upper = grid.back();
        ci.status = CiStatus::UNBOUNDED_AT_GRID;
    } else {
        ci.upper = bisect_boundary(grid[last + 1], grid[last], inside, range.tol);
    }
    return ci;
}

ConfidenceBand band(const Series& series, double alpha, double a, double b,
                    const QuantileTable& table, std::size_t k, CiMethod per_point_method,
                    bool literal_lower_min, double q_override, double tau2_override) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0,1)");
    if (!(0.0 < a && a < b && b < 1.0)) {
        throw InvalidInput("band interval must satisfy 0 < a < b < 1");
    }
    if (per_point_method != CiMethod::LN_SRD && per_point_method != CiMethod::TN_SRD) {
        throw Unsupported("bands support the SRD discrepancy and distance methods only");
    }
    const std::size_t n = series.n();
    if (k == 0) {
        k = static_cast<std::size_t>(
            std::floor(std::cbrt(static_cast<double>(n))));
    }
    if (k < 2) throw InvalidInput("a band needs at least two evaluation points");

    const double per_point_level = std::pow(1.0 - alpha, 1.0 / static_cast<double>(k));
    const double point_alpha = 1.0 - per_point_level;

    double tau2 = tau2_override;
    if (std::isnan(tau2)) {
        const IsotonicFit fit = fit_isotonic(series);
        std::vector<double> residuals(n);
        for (std::size_t i = 0; i < n; ++i) residuals[i] = series.ys[i] - fit.fitted[i];
        tau2 = estimate_tau2(residuals).value;
    }

    const double q = std::isnan(q_override)
                         ? lookup(table, 0.5, per_point_level, LookupMode::EXACT_H)
                         : q_override;

    ConfidenceBand result;
    result.level = 1.0 - alpha;
    result.per_point_level = per_point_level;
    result.nuisance.tau2 = tau2;
    result.t_points.resize(k);
    result.lower_raw.resize(k);
    result.upper_raw.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double t =
            a + (b - a) * static_cast<double>(i) / static_cast<double>(k - 1);
        result.t_points[i] = t;
        const ConfidenceInterval ci =
            per_point_method == CiMethod::LN_SRD
                ? ci_ln_srd(series, t, point_alpha, table, tau2, q)
                : ci_tn_srd(series, t, point_alpha, table, tau2, q);
        result.lower_raw[i] = ci.lower;
        result.upper_raw[i] = ci.upper;
    }

    result.lower_steps = result.lower_raw;
    result.upper_steps = result.upper_raw;
    for (std::size_t i = 1; i < k; ++i) {
        result.lower_steps[i] =
            literal_lower_min ? std::min(result.lower_steps[i - 1], result.lower_steps[i])
                              : std::max(result.lower_steps[i - 1], result.lower_steps[i]);
        result.upper_steps[i] = std::max(result.upper_steps[i - 1], result.upper_steps[i]);
    }
    return result;
}

double ConfidenceBand::lower_at(double t) const {
    if (t < t_points.front() - 1e-12 || t > t_points.back() + 1e-12) {
        throw OutOfRange("band evaluated outside its interval");
    }
    // Constant on [t_i, t_{i+1}); the last point closes the domain.
    auto it = std::upper_bound(t_points.begin(), t_points.end(), t);
    const std::size_t i = it == t_points.begin()
                              ? 0
                              : static_cast<std::size_t>(it - t_points.begin()) - 1;
    return lower_steps[std::min(i, lower_steps.size() - 1)];
}

double ConfidenceBand::upper_at(double t) const {
    if (t < t_points.front() - 1e-12 || t > t_points.back() + 1e-12) {
        throw OutOfRange("band evaluated outside its interval");
    }
    // Constant on (t_i, t_{i+1}]; the first point opens the domain.
    auto it = std::lower_bound(t_points.begin(), t_points.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - t_points.begin());
    return upper_steps[std::min(i, upper_steps.size() - 1)];
}

std::string interval_to_json(const ConfidenceInterval& ci) {
    nlohmann::json j;
    j["method"] = to_string(ci.method);
    j["level"] = ci.level;
    j["status"] = to_string(ci.status);
    if (ci.status != CiStatus::EMPTY_SET) {
        j["lower"] = finite_or_string(ci.lower);
        j["upper"] = finite_or_string(ci.upper);
    } else {
        j["lower"] = nullptr;
        j["upper"] = nullptr;
    }
    j["threshold"] = finite_or_string(ci.threshold);
    j["theta_hat"] = ci.theta_hat;
    j["nuisance"] = nuisance_json(ci.nuisance);
    return j.dump(2) + "\n";
}

std::string band_to_json(const ConfidenceBand& band) {
    nlohmann::json j;
    j["level"] = band.level;
    j["per_point_level"] = band.per_point_level;
    j["t_points"] = band.t_points;
    j["lower_raw"] = band.lower_raw;
    j["upper_raw"] = band.upper_raw;
    j["lower"] = band.lower_steps;
    j["upper"] = band.upper_steps;
    j["nuisance"] = nuisance_json(band.nuisance);
    return j.dump(2) + "\n";
}

} // namespace monotrend
