#include "monotrend/noise.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include <fftw3.h>

#include "monotrend/errors.hpp"
#include "monotrend/rng.hpp"

namespace monotrend {

namespace {

// Schur-Cohn test: all roots of 1 + c_1 z + ... + c_p z^p lie outside the
// unit circle iff every reflection coefficient has modulus < 1.
bool poly_roots_outside_unit_circle(const std::vector<double>& c) {
    std::vector<double> a(c);
    for (std::size_t m = a.size(); m > 0; --m) {
        const double k = a[m - 1];
        if (!(std::fabs(k) < 1.0)) {
            return false;
        }
        const double denom = 1.0 - k * k;
        std::vector<double> next(m - 1);
        for (std::size_t i = 0; i + 1 < m; ++i) {
            next[i] = (a[i] - k * a[m - 2 - i]) / denom;
        }
        a = std::move(next);
    }
    return true;
}

// MA(infinity) weights of the ARMA filter driven by a unit impulse.
std::vector<double> arma_psi_weights(const std::vector<double>& ar,
                                     const std::vector<double>& ma, std::size_t count) {
    std::vector<double> psi(count, 0.0);
    psi[0] = 1.0;
    for (std::size_t j = 1; j < count; ++j) {
        double value = (j <= ma.size()) ? ma[j - 1] : 0.0;
        const std::size_t pmax = std::min(j, ar.size());
        for (std::size_t i = 1; i <= pmax; ++i) {
            value += ar[i - 1] * psi[j - i];
        }
        psi[j] = value;
    }
    return psi;
}

// Apply the ARMA recursion to a driving sequence, discarding a burn-in
// prefix: x_t = sum ar_i x_{t-i} + z_t + sum ma_j z_{t-j}.
std::vector<double> arma_filter(const std::vector<double>& ar, const std::vector<double>& ma,
                                const std::vector<double>& z, std::size_t burn_in) {
    const std::size_t total = z.size();
    std::vector<double> x(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        double value = z[t];
        for (std::size_t j = 1; j <= ma.size() && j <= t; ++j) {
            value += ma[j - 1] * z[t - j];
        }
        for (std::size_t i = 1; i <= ar.size() && i <= t; ++i) {
            value += ar[i - 1] * x[t - i];
        }
        x[t] = value;
    }
    return std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(burn_in), x.end());
}

std::size_t arma_burn_in(const DependenceSpec& spec) {
    return 10 * (spec.ar.size() + spec.ma.size()) + 100;
}

// Autocovariance of the exact FARIMA(0,d,0) core with unit innovations:
// gamma(0) = Gamma(1-2d) / Gamma(1-d)^2 and the ratio recursion
// rho(k) = rho(k-1) (k-1+d)/(k-d).
std::vector<double> farima_core_autocov(double d, std::size_t count) {
    std::vector<double> gamma(count);
    const double g0 = std::exp(std::lgamma(1.0 - 2.0 * d) - 2.0 * std::lgamma(1.0 - d));
    gamma[0] = g0;
    double rho = 1.0;
    for (std::size_t k = 1; k < count; ++k) {
        const double kk = static_cast<double>(k);
        rho *= (kk - 1.0 + d) / (kk - d);
        gamma[k] = g0 * rho;
    }
    return gamma;
}

// Exact Gaussian sample with a prescribed autocovariance via the
// Durbin-Levinson recursion (O(n^2), used for the FARIMA core).
std::vector<double> durbin_levinson_sample(const std::vector<double>& gamma, std::size_t n,
                                           GaussianRng& rng) {
    std::vector<double> x(n);
    std::vector<double> phi;     // predictor coefficients, order k-1
    std::vector<double> phi_new;
    double v = gamma[0];
    x[0] = std::sqrt(v) * rng();
    for (std::size_t k = 2; k <= n; ++k) {
        double num = gamma[k - 1];
        for (std::size_t j = 1; j + 1 < k; ++j) {
            num -= phi[j - 1] * gamma[k - 1 - j];
        }
        const double kappa = num / v;
        phi_new.assign(k - 1, 0.0);
        for (std::size_t j = 1; j + 1 < k; ++j) {
            phi_new[j - 1] = phi[j - 1] - kappa * phi[k - 2 - j];
        }
        phi_new[k - 2] = kappa;
        phi.swap(phi_new);
        v *= (1.0 - kappa * kappa);
        double mean = 0.0;
        for (std::size_t j = 1; j < k; ++j) {
            mean += phi[j - 1] * x[k - 1 - j];
        }
        x[k - 1] = mean + std::sqrt(std::max(v, 0.0)) * rng();
    }
    return x;
}

// FFTW plan creation/destruction is not thread safe; execution is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// Forward DFT of a complex buffer, in place.
void fft_forward(std::vector<std::complex<double>>& data) {
    const int size = static_cast<int>(data.size());
    fftw_plan plan;
    auto* buffer = reinterpret_cast<fftw_complex*>(data.data());
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft_1d(size, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (plan == nullptr) {
        throw NumericalFailure("fft: plan creation failed");
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
}

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

// Exact stationary Gaussian sample by circulant embedding of the
// autocovariance (Davies-Harte).  gamma must provide lags 0..m where the
// embedding has size 2m.
std::vector<double> circulant_embedding_sample(const std::vector<double>& gamma, std::size_t n,
                                               double hurst, GaussianRng& rng) {
    const std::size_t m = gamma.size() - 1;
    const std::size_t size = 2 * m;

    std::vector<std::complex<double>> eigen_input(size);
    for (std::size_t j = 0; j <= m; ++j) {
        eigen_input[j] = gamma[j];
    }
    for (std::size_t j = m + 1; j < size; ++j) {
        eigen_input[j] = gamma[size - j];
    }
    fft_forward(eigen_input);

    std::vector<double> lambda(size);
    double max_lambda = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
        lambda[k] = eigen_input[k].real();
        max_lambda = std::max(max_lambda, lambda[k]);
    }
    for (std::size_t k = 0; k < size; ++k) {
        if (lambda[k] < 0.0) {
            if (lambda[k] < -1e-8 * max_lambda) {
                throw NumericalFailure("circulant embedding: negative eigenvalue (H=" +
                                       std::to_string(hurst) +
                                       ", n=" + std::to_string(n) + ")");
            }
            lambda[k] = 0.0;
        }
    }

    std::vector<std::complex<double>> spectral(size);
    spectral[0] = std::sqrt(lambda[0]) * rng();
    spectral[m] = std::sqrt(lambda[m]) * rng();
    for (std::size_t k = 1; k < m; ++k) {
        const double real_part = rng();
        const double imag_part = rng();
        const double scale = std::sqrt(lambda[k] / 2.0);
        spectral[k] = std::complex<double>(scale * real_part, scale * imag_part);
        spectral[size - k] = std::conj(spectral[k]);
    }
    fft_forward(spectral);

    const double norm = 1.0 / std::sqrt(static_cast<double>(size));
    std::vector<double> sample(n);
    for (std::size_t j = 0; j < n; ++j) {
        sample[j] = spectral[j].real() * norm;
    }
    return sample;
}

} // namespace

std::string to_string(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::IID: return "iid";
        case NoiseKind::ARMA: return "arma";
        case NoiseKind::FGN: return "fgn";
        case NoiseKind::FARIMA: return "farima";
    }
    return "unknown";
}

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "iid") return NoiseKind::IID;
    if (name == "arma") return NoiseKind::ARMA;
    if (name == "fgn") return NoiseKind::FGN;
    if (name == "farima") return NoiseKind::FARIMA;
    throw InvalidInput("unknown noise kind: " + name);
}

void DependenceSpec::validate() const {
    if (!(marginal_var > 0.0)) {
        throw InvalidInput("noise: marginal variance must be positive");
    }
    if (kind == NoiseKind::FGN && !(hurst >= 0.5 && hurst < 1.0)) {
        throw InvalidInput("noise: FGN requires 0.5 <= hurst < 1");
    }
    if (kind == NoiseKind::FARIMA && !(frac_d > 0.0 && frac_d < 0.5)) {
        throw InvalidInput("noise: FARIMA requires 0 < frac_d < 0.5");
    }
    if (kind == NoiseKind::ARMA || kind == NoiseKind::FARIMA) {
        std::vector<double> ar_poly(ar.size());
        for (std::size_t i = 0; i < ar.size(); ++i) {
            ar_poly[i] = -ar[i]; // 1 - phi_1 z - ... - phi_p z^p
        }
        if (!poly_roots_outside_unit_circle(ar_poly)) {
            throw InvalidInput("noise: AR polynomial is not causal");
        }
        if (!poly_roots_outside_unit_circle(ma)) {
            throw InvalidInput("noise: MA polynomial is not invertible");
        }
    }
}

double fgn_autocov(std::size_t k, double hurst, double marginal_var) {
    if (!(hurst >= 0.5 && hurst < 1.0)) {
        throw InvalidInput("fgn_autocov: hurst must lie in [0.5, 1)");
    }
    const double lag = static_cast<double>(k);
    const double two_h = 2.0 * hurst;
    return 0.5 * marginal_var *
           (std::pow(lag + 1.0, two_h) - 2.0 * std::pow(lag, two_h) +
            std::pow(std::fabs(lag - 1.0), two_h));
}

double arma_unit_variance(const std::vector<double>& ar, const std::vector<double>& ma) {
    // The psi-weights of a causal ARMA filter decay geometrically; 4096
    // terms are far beyond machine precision for any causal filter
    // accepted by the Schur-Cohn test.
    const std::vector<double> psi = arma_psi_weights(ar, ma, 4096);
    double var = 0.0;
    for (double w : psi) {
        var += w * w;
    }
    return var;
}

std::vector<double> generate_fgn_unit(std::size_t n, double hurst, std::uint64_t seed) {
    if (n == 0) {
        throw InvalidInput("generate_fgn_unit: n must be positive");
    }
    GaussianRng rng(seed);
    if (n == 1) {
        return {rng()};
    }
    const std::size_t m = next_power_of_two(n);
    std::vector<double> gamma(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
        gamma[k] = fgn_autocov(k, hurst, 1.0);
    }
    return circulant_embedding_sample(gamma, n, hurst, rng);
}

NoiseSample generate(const DependenceSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw InvalidInput("generate: n must be positive");
    }
    spec.validate();

    NoiseSample sample;
    sample.spec = spec;
    sample.seed = seed;
    GaussianRng rng(seed);

    switch (spec.kind) {
        case NoiseKind::IID: {
            const double sd = std::sqrt(spec.marginal_var);
            sample.values.resize(n);
            for (double& v : sample.values) {
                v = sd * rng();
            }
            break;
        }
        case NoiseKind::ARMA: {
            const std::size_t burn_in = arma_burn_in(spec);
            const double innovation_sd =
                std::sqrt(spec.marginal_var / arma_unit_variance(spec.ar, spec.ma));
            std::vector<double> innovations(n + burn_in);
            for (double& v : innovations) {
                v = innovation_sd * rng();
            }
            sample.values = arma_filter(spec.ar, spec.ma, innovations, burn_in);
            break;
        }
        case NoiseKind::FGN: {
            if (n == 1) {
                sample.values = {std::sqrt(spec.marginal_var) * rng()};
                break;
            }
            const std::size_t m = next_power_of_two(n);
            std::vector<double> gamma(m + 1);
            for (std::size_t k = 0; k <= m; ++k) {
                gamma[k] = fgn_autocov(k, spec.hurst, spec.marginal_var);
            }
            sample.values = circulant_embedding_sample(gamma, n, spec.hurst, rng);
            break;
        }
        case NoiseKind::FARIMA: {
            const std::size_t burn_in = arma_burn_in(spec);
            const std::size_t total = n + burn_in;
            const std::vector<double> gamma_core = farima_core_autocov(spec.frac_d, total);
            const std::vector<double> core = durbin_levinson_sample(gamma_core, total, rng);
            std::vector<double> filtered = arma_filter(spec.ar, spec.ma, core, burn_in);

            // Population variance of the filtered process, via the ARMA
            // psi-weights and the core autocovariance, for the rescale.
            const std::vector<double> psi = arma_psi_weights(spec.ar, spec.ma, 512);
            double var = 0.0;
            for (std::size_t i = 0; i < psi.size(); ++i) {
                for (std::size_t j = 0; j < psi.size(); ++j) {
                    const std::size_t lag = (i > j) ? i - j : j - i;
                    if (lag < gamma_core.size()) {
                        var += psi[i] * psi[j] * gamma_core[lag];
                    }
                }
            }
            const double scale = std::sqrt(spec.marginal_var / var);
            for (double& v : filtered) {
                v *= scale;
            }
            sample.values = std::move(filtered);
            break;
        }
    }
    return sample;
}

} // namespace monotrend
