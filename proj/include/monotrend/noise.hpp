#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace monotrend {

/// Supported stationary Gaussian error models.
enum class NoiseKind { IID, ARMA, FGN, FARIMA };

/// Descriptor of an error model.  Unused fields are ignored for a given
/// kind (e.g. hurst only matters for FGN, frac_d only for FARIMA).
struct DependenceSpec {
    NoiseKind kind = NoiseKind::IID;
    std::vector<double> ar;      ///< autoregressive coefficients
    std::vector<double> ma;      ///< moving-average coefficients
    double hurst = 0.5;          ///< FGN: H in [0.5, 1)
    double frac_d = 0.0;         ///< FARIMA: fractional order d in (0, 0.5)
    double marginal_var = 1.0;   ///< marginal variance sigma^2 > 0

    /// Throws InvalidInput when the parameters are out of domain or the
    /// ARMA filter is not causal/invertible.
    void validate() const;
};

/// A reproducible sample: identical (spec, seed, n) always produce
/// identical values, independent of threading.
struct NoiseSample {
    std::vector<double> values;
    DependenceSpec spec;
    std::uint64_t seed = 0;
};

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

/// Autocovariance of fractional Gaussian noise at lag k, implied by the
/// fractional Brownian motion covariance:
///   gamma(k) = (sigma^2/2) (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}).
/// Throws InvalidInput when hurst lies outside [0.5, 1).
double fgn_autocov(std::size_t k, double hurst, double marginal_var);

/// Generate one sample of length n from the error model.
///  - IID: independent Gaussians scaled to the marginal variance.
///  - ARMA: recursive filter on Gaussian innovations with a burn-in of
///    10 (p+q) + 100 discarded values; innovations scaled so the marginal
///    variance matches the spec.
///  - FGN: exact stationary sample via circulant embedding of the
///    autocovariance.
///  - FARIMA(p,d,q): exact FARIMA(0,d,0) core via Durbin-Levinson, then
///    ARMA filtering with the same burn-in, rescaled to the marginal
///    variance.
/// Throws NumericalFailure when the circulant embedding produces a
/// materially negative eigenvalue and InvalidInput for bad parameters.
NoiseSample generate(const DependenceSpec& spec, std::size_t n, std::uint64_t seed);

/// Exact unit-variance fractional Gaussian noise of length n (internal
/// building block, also used by the limit-distribution simulations).
std::vector<double> generate_fgn_unit(std::size_t n, double hurst, std::uint64_t seed);

/// Stationary variance of the ARMA filter output when driven by
/// unit-variance white noise (via the MA(infinity) expansion).
double arma_unit_variance(const std::vector<double>& ar, const std::vector<double>& ma);

} // namespace monotrend
