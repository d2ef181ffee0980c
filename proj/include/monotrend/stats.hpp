#pragma once

#include <vector>

#include "monotrend/isotonic.hpp"

namespace monotrend {

/// The discrepancy statistics between the unconstrained and the
/// point-constrained isotonic fits, together with the derived ratio.
/// All quantities are unscaled; any dependence-specific normalisation is
/// applied by the caller.
struct StatValue {
    double l_raw;      ///< residual-sum-of-squares difference (>= 0)
    double t_raw;      ///< squared L2 distance between the fits (>= 0)
    double r;          ///< l_raw / t_raw, with 0/0 read as 1; clamped to >= 1
    double psi;        ///< -log(r - 1); +infinity when psi_infinite is set
    bool psi_infinite; ///< true when r - 1 < 1e-15 (includes exact ties)
};

/// The statistics evaluated along a grid of constraint values.
struct StatProfile {
    std::vector<double> thetas;
    std::vector<StatValue> values;
    double theta_hat; ///< unconstrained fit evaluated at t0
};

/// Evaluate the discrepancy statistics at a single constraint value by
/// fitting both estimators and forming the definitional sums.
StatValue discrepancy(const Series& series, double t0, double theta);

/// Closed-form profile machinery: after one split fit, the statistics at
/// any constraint value follow from the distinct split-fit levels and
/// their block lengths, in time linear in the number of blocks.
class ProfileEvaluator {
public:
    ProfileEvaluator(const Series& series, double t0);

    double theta_hat() const { return theta_hat_; }

    /// Unscaled L profile at theta.
    double l_at(double theta) const;
    /// Unscaled T profile at theta.
    double t_at(double theta) const;
    /// All statistics at theta.
    StatValue at(double theta) const;

private:
    std::vector<double> left_levels_, right_levels_;
    std::vector<double> left_weights_, right_weights_;
    double theta_hat_;
};

/// Profile over a non-empty increasing grid via the closed form.
/// Throws InvalidInput on an empty or non-increasing grid.
StatProfile profile(const Series& series, double t0, const std::vector<double>& theta_grid);

/// Shared ratio conventions: r = l/t with 0/0 read as 1 and clamped to
/// >= 1; psi = -log(r-1), clamped to +infinity when r-1 < 1e-15.
StatValue make_stat_value(double l_raw, double t_raw);

} // namespace monotrend
