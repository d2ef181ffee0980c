#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "monotrend/isotonic.hpp"

namespace monotrend {

/// Long-run variance estimate from fit residuals.
struct Tau2Estimate {
    double value;               ///< tau^2-hat, clamped to gamma(0) if negative
    std::size_t max_lag;        ///< floor(sqrt(n))
    std::vector<double> acvf;   ///< empirical autocovariances, lags 0..max_lag
    bool clamped;               ///< true when the weighted sum went negative
};

/// Hurst-index estimate from a wavelet log-variance regression.
struct HurstEstimate {
    double value;                                   ///< H-hat in (0,1)
    std::size_t octave_lo, octave_hi;               ///< octave range used
    double regression_slope;                        ///< fitted log2-variance slope
    std::vector<std::pair<std::size_t, double>> log_variances; ///< (octave, log2 mean d^2)
};

/// Kernel estimate of the trend derivative at a point.
struct DerivativeEstimate {
    enum class Method { CV, OVERSMOOTH, FIXED };
    double value;        ///< m'(t0) estimate (non-negative for a monotone fit)
    double bandwidth;
    Method method;
    bool degenerate;     ///< true when the fit had no jumps (value 0)
};

/// tau^2-hat = gamma(0) + 2 sum_{k=1}^{floor(sqrt n)} (1 - k/sqrt n) gamma(k)
/// with the uncentered empirical autocovariance
/// gamma(k) = n^{-1} sum_{i=1}^{n-k} e_i e_{i+k}.
/// A negative value (possible in finite samples) is clamped to gamma(0).
/// Throws InvalidInput for n < 4.
Tau2Estimate estimate_tau2(const std::vector<double>& residuals);

/// H-hat from a weighted least-squares regression of log2 scale-wise mean
/// squared detail coefficients on the octave index: H = (slope + 1)/2.
/// Daubechies filters with 2..4 vanishing moments are supported (default
/// 4); boundary-free (valid) convolution keeps the estimate exactly
/// invariant to added linear trends.  Octaves default to 3..(log2 n - 4).
/// Throws InvalidInput when the input is too short for the octave range
/// and Unsupported for unavailable filter orders.
HurstEstimate estimate_hurst(const std::vector<double>& xs,
                             std::size_t vanishing_moments = 4,
                             std::size_t octave_lo = 3, std::size_t octave_hi = 0);

/// Centered empirical variance with divisor n - 1.
/// Throws InvalidInput for n < 2.
double estimate_sigma2(const std::vector<double>& ys);

/// Kernel derivative of a step function with jumps of size delta_j at
/// locations s_j: sum_j (delta_j / h) K((t0 - s_j)/h), Gaussian kernel K.
double derivative_from_steps(const std::vector<double>& jump_locations,
                             const std::vector<double>& jump_sizes, double t0,
                             double bandwidth);

/// Same estimator applied to an isotonic fit on the uniform design
/// t_i = i/n: the fit jumps at s = j/n for each 0-based jump index j.
/// A fit without jumps returns value 0 with the degenerate flag set.
/// Throws InvalidInput unless 0 < t0 < 1 and bandwidth > 0.
DerivativeEstimate estimate_derivative(const IsotonicFit& fit, double t0, double bandwidth);

/// Cross-validated bandwidth: the data are split into two halves by
/// seeded Bernoulli(1/2) draws; for each candidate h, each half's
/// isotonic-fit derivative is kernel-smoothed and integrated back to a
/// trend estimate (anchored by the training half's least-squares
/// constant), and CV(h) sums the squared residuals of each half against
/// the other half's rebuilt trend.  Returns the minimizer, ties to the
/// smaller h.  Throws InvalidInput for fewer than one candidate or when
/// ten resplit attempts fail to give both halves two points.
double cv_bandwidth(const Series& series, double t0,
                    const std::vector<double>& candidate_hs, std::uint64_t seed);

/// Default geometric candidate grid of 10 points spanning
/// [n^{-1/3}, n^{-1/10}].
std::vector<double> default_bandwidth_grid(std::size_t n);

/// The oversmoothing bandwidth n^{-1/7}.  Throws InvalidInput for n < 2.
double oversmooth_bandwidth(std::size_t n);

} // namespace monotrend
