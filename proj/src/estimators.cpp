#include "monotrend/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "monotrend/errors.hpp"

namespace monotrend {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double gauss_kernel(double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }

// Daubechies scaling (lowpass) filters, normalized so sum h = sqrt(2).
const std::vector<double>& daubechies_lowpass(std::size_t vanishing_moments) {
    static const std::vector<double> db2 = {
        0.48296291314469025, 0.836516303737469, 0.22414386804185735,
        -0.12940952255092145};
    static const std::vector<double> db3 = {
        0.3326705529509569, 0.8068915093133388, 0.4598775021193313,
        -0.13501102001039084, -0.08544127388224149, 0.035226291882100656};
    static const std::vector<double> db4 = {
        0.23037781330885523, 0.7148465705525415, 0.6308807679295904,
        -0.02798376941698385, -0.18703481171888114, 0.030841381835986965,
        0.032883011666982945, -0.010597401784997278};
    switch (vanishing_moments) {
        case 2: return db2;
        case 3: return db3;
        case 4: return db4;
        default:
            throw Unsupported("estimate_hurst: filters available for 2..4 vanishing moments");
    }
}

} // namespace

Tau2Estimate estimate_tau2(const std::vector<double>& residuals) {
    const std::size_t n = residuals.size();
    if (n < 4) {
        throw InvalidInput("estimate_tau2: need at least four residuals");
    }
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const std::size_t max_lag = static_cast<std::size_t>(std::floor(sqrt_n));

    Tau2Estimate est;
    est.max_lag = max_lag;
    est.acvf.resize(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) {
            sum += residuals[i] * residuals[i + k];
        }
        est.acvf[k] = sum / static_cast<double>(n);
    }
    double value = est.acvf[0];
    for (std::size_t k = 1; k <= max_lag; ++k) {
        value += 2.0 * (1.0 - static_cast<double>(k) / sqrt_n) * est.acvf[k];
    }
    est.clamped = value < 0.0;
    est.value = est.clamped ? est.acvf[0] : value;
    return est;
}

HurstEstimate estimate_hurst(const std::vector<double>& xs, std::size_t vanishing_moments,
                             std::size_t octave_lo, std::size_t octave_hi) {
    if (vanishing_moments < 2) {
        throw InvalidInput("estimate_hurst: need at least two vanishing moments");
    }
    const std::vector<double>& h = daubechies_lowpass(vanishing_moments);
    const std::size_t taps = h.size();
    std::vector<double> g(taps);
    for (std::size_t k = 0; k < taps; ++k) {
        g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[taps - 1 - k];
    }

    const std::size_t n = xs.size();
    if (octave_hi == 0) {
        const std::size_t log2n =
            static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(n))));
        octave_hi = log2n > 4 ? log2n - 4 : 0;
    }
    if (octave_lo < 1 || octave_hi < octave_lo) {
        throw InvalidInput("estimate_hurst: empty octave range (input too short?)");
    }

    // Decimated pyramid with boundary-free (valid) correlation: every
    // output coefficient depends only on genuine input samples, so filter
    // moments annihilate polynomial trends exactly.
    HurstEstimate est;
    est.octave_lo = octave_lo;
    est.octave_hi = octave_hi;
    std::vector<double> approx = xs;
    std::vector<double> scale_weights;
    for (std::size_t j = 1; j <= octave_hi; ++j) {
        const std::size_t m = approx.size();
        if (m < taps + 2) {
            throw InvalidInput("estimate_hurst: input too short for requested octaves");
        }
        const std::size_t out_len = (m - taps) / 2 + 1;
        std::vector<double> next(out_len);
        std::vector<double> detail(out_len);
        for (std::size_t t = 0; t < out_len; ++t) {
            double a = 0.0, d = 0.0;
            for (std::size_t k = 0; k < taps; ++k) {
                const double v = approx[2 * t + k];
                a += h[k] * v;
                d += g[k] * v;
            }
            next[t] = a;
            detail[t] = d;
        }
        approx = std::move(next);
        if (j >= octave_lo) {
            double mean_sq = 0.0;
            for (double d : detail) {
                mean_sq += d * d;
            }
            mean_sq /= static_cast<double>(detail.size());
            if (!(mean_sq > 0.0)) {
                throw NumericalFailure("estimate_hurst: vanishing detail energy");
            }
            est.log_variances.emplace_back(j, std::log2(mean_sq));
            scale_weights.push_back(static_cast<double>(detail.size()));
        }
    }

    // Weighted least squares of log2 variance on octave, weights equal to
    // the coefficient count at each scale.
    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (std::size_t idx = 0; idx < est.log_variances.size(); ++idx) {
        const auto& [j, y] = est.log_variances[idx];
        const double w = scale_weights[idx];
        const double x = static_cast<double>(j);
        sw += w;
        swx += w * x;
        swy += w * y;
        swxx += w * x * x;
        swxy += w * x * y;
    }
    const double denom = sw * swxx - swx * swx;
    if (!(std::fabs(denom) > 0.0)) {
        throw InvalidInput("estimate_hurst: need at least two octaves for the regression");
    }
    est.regression_slope = (sw * swxy - swx * swy) / denom;
    est.value = (est.regression_slope + 1.0) / 2.0;
    return est;
}

double estimate_sigma2(const std::vector<double>& ys) {
    const std::size_t n = ys.size();
    if (n < 2) {
        throw InvalidInput("estimate_sigma2: need at least two observations");
    }
    double mean = 0.0;
    for (double y : ys) {
        mean += y;
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double y : ys) {
        ss += (y - mean) * (y - mean);
    }
    return ss / static_cast<double>(n - 1);
}

double derivative_from_steps(const std::vector<double>& jump_locations,
                             const std::vector<double>& jump_sizes, double t0,
                             double bandwidth) {
    if (!(bandwidth > 0.0)) {
        throw InvalidInput("derivative: bandwidth must be positive");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < jump_locations.size(); ++j) {
        sum += jump_sizes[j] / bandwidth * gauss_kernel((t0 - jump_locations[j]) / bandwidth);
    }
    return sum;
}

DerivativeEstimate estimate_derivative(const IsotonicFit& fit, double t0, double bandwidth) {
    if (!(t0 > 0.0 && t0 < 1.0)) {
        throw InvalidInput("derivative: t0 must lie in (0,1)");
    }
    const std::size_t n = fit.fitted.size();
    std::vector<double> locations, sizes;
    for (std::size_t j : fit.jump_indices) {
        locations.push_back(static_cast<double>(j) / static_cast<double>(n));
        sizes.push_back(fit.fitted[j] - fit.fitted[j - 1]);
    }
    DerivativeEstimate est;
    est.bandwidth = bandwidth;
    est.method = DerivativeEstimate::Method::FIXED;
    est.degenerate = locations.empty();
    est.value = derivative_from_steps(locations, sizes, t0, bandwidth);
    return est;
}

namespace {

// Jump representation of the isotonic fit of one data half on its native
// design points; the step function jumps at the t of the last observation
// of each earlier block (matching the uniform-design convention).
struct HalfModel {
    std::vector<double> jump_locations;
    std::vector<double> jump_sizes;
};

HalfModel half_model(const std::vector<double>& ts, const std::vector<double>& ys) {
    Series s;
    s.ys = ys;
    const IsotonicFit fit = fit_isotonic(s);
    HalfModel model;
    for (std::size_t i : fit.jump_indices) {
        model.jump_locations.push_back(ts[i - 1]);
        model.jump_sizes.push_back(fit.fitted[i] - fit.fitted[i - 1]);
    }
    return model;
}

// Cumulative trapezoid integral of the smoothed derivative on a fine
// grid over [0,1], returned as a lookup usable at arbitrary t.
struct IntegratedTrend {
    std::vector<double> grid;
    std::vector<double> values;

    double operator()(double t) const {
        const auto it = std::lower_bound(grid.begin(), grid.end(), t);
        if (it == grid.begin()) return values.front();
        if (it == grid.end()) return values.back();
        const std::size_t i = static_cast<std::size_t>(it - grid.begin());
        const double w = (t - grid[i - 1]) / (grid[i] - grid[i - 1]);
        return values[i - 1] + w * (values[i] - values[i - 1]);
    }
};

IntegratedTrend integrate_derivative(const HalfModel& model, double bandwidth) {
    constexpr std::size_t kGridPoints = 201;
    IntegratedTrend trend;
    trend.grid.resize(kGridPoints);
    trend.values.resize(kGridPoints);
    double previous_d = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < kGridPoints; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(kGridPoints - 1);
        const double d =
            derivative_from_steps(model.jump_locations, model.jump_sizes, t, bandwidth);
        if (i > 0) {
            acc += 0.5 * (previous_d + d) / static_cast<double>(kGridPoints - 1);
        }
        trend.grid[i] = t;
        trend.values[i] = acc;
        previous_d = d;
    }
    return trend;
}

} // namespace

std::vector<double> default_bandwidth_grid(std::size_t n) {
    const double lo = std::pow(static_cast<double>(n), -1.0 / 3.0);
    const double hi = std::pow(static_cast<double>(n), -1.0 / 10.0);
    std::vector<double> grid(10);
    for (std::size_t i = 0; i < 10; ++i) {
        grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / 9.0);
    }
    return grid;
}

double cv_bandwidth(const Series& series, double t0,
                    const std::vector<double>& candidate_hs, std::uint64_t seed) {
    (void)t0; // the CV criterion is global; t0 only selects the final use site
    if (candidate_hs.empty()) {
        throw InvalidInput("cv_bandwidth: need at least one candidate");
    }
    const std::size_t n = series.n();

    std::mt19937_64 engine(seed);
    std::vector<double> t1, y1, t2, y2;
    bool split_ok = false;
    for (int attempt = 0; attempt < 10 && !split_ok; ++attempt) {
        t1.clear(); y1.clear(); t2.clear(); y2.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i + 1) / static_cast<double>(n);
            if ((engine() >> 32) & 1ULL) {
                t1.push_back(t);
                y1.push_back(series.ys[i]);
            } else {
                t2.push_back(t);
                y2.push_back(series.ys[i]);
            }
        }
        split_ok = t1.size() >= 2 && t2.size() >= 2;
    }
    if (!split_ok) {
        throw InvalidInput("cv_bandwidth: could not split the data into two usable halves");
    }

    const HalfModel m1 = half_model(t1, y1);
    const HalfModel m2 = half_model(t2, y2);

    std::vector<double> hs = candidate_hs;
    std::sort(hs.begin(), hs.end());

    double best_h = hs.front();
    double best_cv = std::numeric_limits<double>::infinity();
    for (double h : hs) {
        if (!(h > 0.0)) {
            throw InvalidInput("cv_bandwidth: candidates must be positive");
        }
        const IntegratedTrend f1 = integrate_derivative(m1, h);
        const IntegratedTrend f2 = integrate_derivative(m2, h);
        // Anchor each rebuilt trend by its own (training) half's
        // least-squares constant, then score on the other half.
        double c1 = 0.0, c2 = 0.0;
        for (std::size_t i = 0; i < t1.size(); ++i) c1 += y1[i] - f1(t1[i]);
        for (std::size_t i = 0; i < t2.size(); ++i) c2 += y2[i] - f2(t2[i]);
        c1 /= static_cast<double>(t1.size());
        c2 /= static_cast<double>(t2.size());
        double cv = 0.0;
        for (std::size_t i = 0; i < t1.size(); ++i) {
            const double r = y1[i] - (c2 + f2(t1[i]));
            cv += r * r;
        }
        for (std::size_t i = 0; i < t2.size(); ++i) {
            const double r = y2[i] - (c1 + f1(t2[i]));
            cv += r * r;
        }
        if (cv < best_cv) { // strict: ties resolve to the smaller h
            best_cv = cv;
            best_h = h;
        }
    }
    return best_h;
}

double oversmooth_bandwidth(std::size_t n) {
    if (n < 2) {
        throw InvalidInput("oversmooth_bandwidth: need n >= 2");
    }
    return std::pow(static_cast<double>(n), -1.0 / 7.0);
}

} // namespace monotrend
