#include "monotrend/stats.hpp"

#include <cmath>
#include <limits>

#include "monotrend/errors.hpp"

namespace monotrend {

namespace {

// Threshold below which the relative excess r - 1 is treated as an exact
// tie: beyond this point the logarithm would only amplify rounding noise.
constexpr double kPsiTieThreshold = 1e-15;

} // namespace

StatValue make_stat_value(double l_raw, double t_raw) {
    StatValue v;
    v.l_raw = l_raw;
    v.t_raw = t_raw;
    if (t_raw <= 0.0) {
        // T = 0 forces L = 0 up to rounding; read the ratio 0/0 as 1.
        v.r = 1.0;
        v.psi = std::numeric_limits<double>::infinity();
        v.psi_infinite = true;
        return v;
    }
    const double rel = (l_raw - t_raw) / t_raw;
    if (rel < kPsiTieThreshold) {
        v.r = 1.0;
        v.psi = std::numeric_limits<double>::infinity();
        v.psi_infinite = true;
    } else {
        v.r = 1.0 + rel;
        v.psi = -std::log(rel);
        v.psi_infinite = false;
    }
    return v;
}

StatValue discrepancy(const Series& series, double t0, double theta) {
    const IsotonicFit fit = fit_isotonic(series);
    const ConstrainedFit cfit = fit_constrained(series, t0, theta);
    const std::size_t n = series.n();

    double rss_con = 0.0;
    double rss_iso = 0.0;
    double dist = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rc = series.ys[i] - cfit.fitted[i];
        const double ri = series.ys[i] - fit.fitted[i];
        const double d = fit.fitted[i] - cfit.fitted[i];
        rss_con += rc * rc;
        rss_iso += ri * ri;
        dist += d * d;
    }
    return make_stat_value(rss_con - rss_iso, dist);
}

ProfileEvaluator::ProfileEvaluator(const Series& series, double t0) {
    const SplitFit split = fit_split(series, t0);
    for (const Block& b : split.left.blocks) {
        left_levels_.push_back(b.level);
        left_weights_.push_back(static_cast<double>(b.end - b.start + 1));
    }
    for (const Block& b : split.right.blocks) {
        right_levels_.push_back(b.level);
        right_weights_.push_back(static_cast<double>(b.end - b.start + 1));
    }
    theta_hat_ = evaluate_fit(fit_isotonic(series), t0);
}

double ProfileEvaluator::l_at(double theta) const {
    // The unconstrained fit is the split fit clipped at theta_hat, so the
    // per-index sums collapse to block-weighted sums over distinct levels:
    //   L(theta) = sum_left  w [ (a ^ th - theta)^2 - (a ^ theta - theta)^2 ]
    //            + sum_right w [ (a v th - theta)^2 - (a v theta - theta)^2 ]
    double sum = 0.0;
    for (std::size_t i = 0; i < left_levels_.size(); ++i) {
        const double a = left_levels_[i];
        const double u = std::min(a, theta_hat_) - theta;
        const double c = std::min(a, theta) - theta;
        sum += left_weights_[i] * (u * u - c * c);
    }
    for (std::size_t i = 0; i < right_levels_.size(); ++i) {
        const double a = right_levels_[i];
        const double u = std::max(a, theta_hat_) - theta;
        const double c = std::max(a, theta) - theta;
        sum += right_weights_[i] * (u * u - c * c);
    }
    return sum;
}

double ProfileEvaluator::t_at(double theta) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < left_levels_.size(); ++i) {
        const double a = left_levels_[i];
        const double d = std::min(a, theta_hat_) - std::min(a, theta);
        sum += left_weights_[i] * d * d;
    }
    for (std::size_t i = 0; i < right_levels_.size(); ++i) {
        const double a = right_levels_[i];
        const double d = std::max(a, theta_hat_) - std::max(a, theta);
        sum += right_weights_[i] * d * d;
    }
    return sum;
}

StatValue ProfileEvaluator::at(double theta) const {
    return make_stat_value(l_at(theta), t_at(theta));
}

StatProfile profile(const Series& series, double t0, const std::vector<double>& theta_grid) {
    if (theta_grid.empty()) {
        throw InvalidInput("profile: empty constraint grid");
    }
    for (std::size_t i = 1; i < theta_grid.size(); ++i) {
        if (!(theta_grid[i] > theta_grid[i - 1])) {
            throw InvalidInput("profile: constraint grid must be increasing");
        }
    }
    const ProfileEvaluator eval(series, t0);
    StatProfile prof;
    prof.thetas = theta_grid;
    prof.theta_hat = eval.theta_hat();
    prof.values.reserve(theta_grid.size());
    for (double theta : theta_grid) {
        prof.values.push_back(eval.at(theta));
    }
    return prof;
}

} // namespace monotrend
