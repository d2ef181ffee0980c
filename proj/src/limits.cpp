#include "monotrend/limits.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <json.hpp>

#include "monotrend/errors.hpp"
#include "monotrend/isotonic.hpp"
#include "monotrend/noise.hpp"
#include "monotrend/rng.hpp"

namespace monotrend {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_probs(const std::vector<double>& probs) {
    if (probs.empty()) {
        throw InvalidInput("simulate: need at least one probability");
    }
    double previous = 0.0;
    for (double p : probs) {
        if (!(p > previous && p < 1.0)) {
            throw InvalidInput("simulate: probabilities must be strictly increasing in (0,1)");
        }
        previous = p;
    }
}

unsigned resolve_threads(unsigned threads) {
    if (threads != 0) {
        return threads;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Run M independent replications, each keyed by its index so the result
// does not depend on scheduling.
template <typename Body>
void run_replications(std::size_t M, unsigned threads, Body&& body) {
    threads = resolve_threads(threads);
    if (threads == 1) {
        for (std::size_t r = 0; r < M; ++r) {
            body(r);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t r = next.fetch_add(1);
                if (r >= M) {
                    return;
                }
                body(r);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

QuantileTable build_table(const std::vector<double>& values, StatisticKind kind,
                          Provenance provenance, QuantileTable::SimParams params,
                          double hurst, const std::vector<double>& probs) {
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    HurstEntry entry;
    entry.hurst = hurst;
    for (double p : probs) {
        QuantileRow row;
        row.p = p;
        row.q = empirical_quantile(sorted, p);
        row.q_infinite = std::isinf(row.q);
        if (sorted.size() >= 100) {
            const QuantileSe se = quantile_se(sorted, p);
            row.se = se.value;
            row.se_infinite = se.infinite;
        } else {
            row.se = kInf;
            row.se_infinite = true;
        }
        entry.rows.push_back(row);
    }
    QuantileTable table;
    table.statistic = kind;
    table.provenance = provenance;
    table.sim_params = params;
    table.entries.push_back(std::move(entry));
    table.validate();
    return table;
}

SimulationResult assemble_result(LimitSample sample, Provenance provenance,
                                 QuantileTable::SimParams params, double hurst,
                                 const std::vector<double>& probs) {
    SimulationResult result;
    result.l_table = build_table(sample.l_values, StatisticKind::L, provenance, params, hurst,
                                 probs);
    result.psi_table = build_table(sample.psi_values, StatisticKind::PSI, provenance, params,
                                   hurst, probs);
    result.sample = std::move(sample);
    return result;
}

} // namespace

std::string to_string(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::L: return "L";
        case StatisticKind::T: return "T";
        case StatisticKind::PSI: return "PSI";
    }
    return "unknown";
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::EMBEDDED_PAPER: return "EMBEDDED_PAPER";
        case Provenance::SIMULATED_M1: return "SIMULATED_M1";
        case Provenance::SIMULATED_M2: return "SIMULATED_M2";
    }
    return "unknown";
}

StatisticKind statistic_kind_from_string(const std::string& name) {
    if (name == "L") return StatisticKind::L;
    if (name == "T") return StatisticKind::T;
    if (name == "PSI") return StatisticKind::PSI;
    throw InvalidInput("unknown statistic kind: " + name);
}

Provenance provenance_from_string(const std::string& name) {
    if (name == "EMBEDDED_PAPER") return Provenance::EMBEDDED_PAPER;
    if (name == "SIMULATED_M1") return Provenance::SIMULATED_M1;
    if (name == "SIMULATED_M2") return Provenance::SIMULATED_M2;
    throw InvalidInput("unknown provenance: " + name);
}

void QuantileTable::validate() const {
    for (const HurstEntry& entry : entries) {
        double prev_p = 0.0;
        double prev_q = -kInf;
        for (const QuantileRow& row : entry.rows) {
            if (!(row.p > prev_p && row.p < 1.0)) {
                throw InvalidInput("quantile table: probabilities must be strictly "
                                   "increasing in (0,1)");
            }
            if (row.q < prev_q) {
                throw InvalidInput("quantile table: quantiles must be non-decreasing");
            }
            prev_p = row.p;
            prev_q = row.q;
        }
    }
}

double empirical_quantile(const std::vector<double>& sorted_values, double p) {
    if (sorted_values.empty() || !(p > 0.0 && p < 1.0)) {
        throw InvalidInput("empirical_quantile: need data and p in (0,1)");
    }
    const std::size_t m = sorted_values.size();
    std::size_t index =
        static_cast<std::size_t>(std::ceil(p * static_cast<double>(m)));
    if (index == 0) index = 1;
    if (index > m) index = m;
    return sorted_values[index - 1];
}

QuantileSe quantile_se(const std::vector<double>& values, double p) {
    const std::size_t m = values.size();
    if (m < 100) {
        throw InvalidInput("quantile_se: need at least 100 samples");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidInput("quantile_se: p must lie in (0,1)");
    }
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    const std::size_t window =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
    std::size_t center = static_cast<std::size_t>(std::ceil(p * static_cast<double>(m)));
    if (center == 0) center = 1;
    if (center > m) center = m;
    const std::size_t lo = center > window / 2 ? center - window / 2 : 1;
    const std::size_t hi = std::min(m, center + window / 2);
    const double spread = sorted[hi - 1] - sorted[lo - 1];
    if (!(spread > 0.0) || !std::isfinite(spread) || hi == lo) {
        return {kInf, true};
    }
    const double density = (static_cast<double>(hi - lo) / static_cast<double>(m)) / spread;
    const double se =
        std::sqrt(p * (1.0 - p)) / (std::sqrt(static_cast<double>(m)) * density);
    return {se, false};
}

SimulationResult simulate_m1(std::size_t n, std::size_t M, double hurst, double marginal_var,
                             const std::vector<double>& probs, std::uint64_t seed,
                             unsigned threads) {
    if (n < 100) {
        throw InvalidInput("simulate_m1: need n >= 100");
    }
    if (M < 1) {
        throw InvalidInput("simulate_m1: need at least one replication");
    }
    validate_probs(probs);
    const bool srd = hurst == 0.5;
    if (!srd && !(hurst > 0.5 && hurst < 1.0)) {
        throw InvalidInput("simulate_m1: hurst must be 0.5 (SRD) or in (0.5, 1)");
    }
    if (!(marginal_var > 0.0)) {
        throw InvalidInput("simulate_m1: marginal variance must be positive");
    }

    const double sigma = std::sqrt(marginal_var);
    double scale;
    if (srd) {
        scale = 1.0 / marginal_var; // tau^2 = sigma^2 for IID errors
    } else {
        const double e = (2.0 * hurst - 1.0) / (2.0 - hurst);
        const double a = sigma;
        const double b = 0.5;
        scale = std::pow(static_cast<double>(n), -e) / (a * a * std::pow(a / b, e));
    }

    LimitSample sample;
    sample.l_values.resize(M);
    sample.t_values.resize(M);
    sample.psi_values.resize(M);
    std::atomic<std::size_t> infinite_count{0};

    run_replications(M, threads, [&](std::size_t r) {
        const std::uint64_t stream = derive_stream(seed, r);
        Series series;
        series.ys.resize(n);
        if (srd) {
            GaussianRng rng(stream);
            for (std::size_t i = 0; i < n; ++i) {
                series.ys[i] =
                    static_cast<double>(i + 1) / static_cast<double>(n) + sigma * rng();
            }
        } else {
            const std::vector<double> fgn = generate_fgn_unit(n, hurst, stream);
            for (std::size_t i = 0; i < n; ++i) {
                series.ys[i] =
                    static_cast<double>(i + 1) / static_cast<double>(n) + sigma * fgn[i];
            }
        }
        const StatValue v = discrepancy(series, 0.5, 0.5);
        sample.l_values[r] = scale * v.l_raw;
        sample.t_values[r] = scale * v.t_raw;
        sample.psi_values[r] = v.psi;
        if (v.psi_infinite) {
            infinite_count.fetch_add(1, std::memory_order_relaxed);
        }
    });
    sample.psi_infinite_count = infinite_count.load();

    QuantileTable::SimParams params;
    params.n = n;
    params.reps = M;
    return assemble_result(std::move(sample), Provenance::SIMULATED_M1, params, hurst, probs);
}

StatValue m2_statistic(const std::vector<double>& unit_increments, double step, double hurst,
                       double grid_half_width) {
    if (!(step > 0.0) || !(grid_half_width > 0.0)) {
        throw InvalidInput("m2_statistic: step and half-width must be positive");
    }
    const std::size_t K = static_cast<std::size_t>(std::llround(grid_half_width / step));
    if (K < 2 || unit_increments.size() != 2 * K) {
        throw InvalidInput("m2_statistic: increment stream must have 2*K entries");
    }
    const double noise_scale = std::pow(step, hurst);

    // Slopes over the grid cells: the path increment of Y = W + t^2 per
    // cell, divided by the step; the slope processes are then isotonic
    // fits of these cell slopes (the minorant-slope identity).
    Series slopes;
    slopes.ys.resize(2 * K);
    for (std::size_t j = 0; j < 2 * K; ++j) {
        // Cell j covers (t_{j-K}, t_{j-K+1}] with t_k = k * step.
        const double t1 = (static_cast<double>(j) - static_cast<double>(K)) * step;
        const double t2 = t1 + step;
        slopes.ys[j] = noise_scale * unit_increments[j] / step + (t2 * t2 - t1 * t1) / step;
    }
    const IsotonicFit full = fit_isotonic(slopes);
    const ConstrainedFit constrained = fit_constrained(slopes, 0.5, 0.0);

    double l_sum = 0.0;
    double t_sum = 0.0;
    for (std::size_t j = 0; j < 2 * K; ++j) {
        const double s = full.fitted[j];
        const double s0 = constrained.fitted[j];
        l_sum += (s * s - s0 * s0) * step;
        t_sum += (s - s0) * (s - s0) * step;
    }
    return make_stat_value(l_sum, t_sum);
}

SimulationResult simulate_m2(double step, std::size_t M, double hurst,
                             const std::vector<double>& probs, std::uint64_t seed,
                             unsigned threads, double grid_half_width) {
    if (!(step > 0.0)) {
        throw InvalidInput("simulate_m2: step must be positive");
    }
    if (M < 1) {
        throw InvalidInput("simulate_m2: need at least one replication");
    }
    validate_probs(probs);
    const bool srd = hurst == 0.5;
    if (!srd && !(hurst > 0.5 && hurst < 1.0)) {
        throw InvalidInput("simulate_m2: hurst must be 0.5 (SRD) or in (0.5, 1)");
    }
    const std::size_t K = static_cast<std::size_t>(std::llround(grid_half_width / step));
    if (K < 2) {
        throw InvalidInput("simulate_m2: step too coarse for the grid");
    }

    LimitSample sample;
    sample.l_values.resize(M);
    sample.t_values.resize(M);
    sample.psi_values.resize(M);
    std::atomic<std::size_t> infinite_count{0};
    std::atomic<std::size_t> redrawn{0};

    run_replications(M, threads, [&](std::size_t r) {
        StatValue v{};
        for (std::uint64_t attempt = 0;; ++attempt) {
            const std::uint64_t stream =
                derive_stream(seed, r + (attempt << 40));
            std::vector<double> z;
            if (srd) {
                GaussianRng rng(stream);
                z.resize(2 * K);
                for (double& value : z) {
                    value = rng();
                }
            } else {
                z = generate_fgn_unit(2 * K, hurst, stream);
            }
            v = m2_statistic(z, step, hurst, grid_half_width);
            // Degenerate path: zero distance but positive discrepancy
            // cannot be ratio-scored; redraw it.
            if (!(v.t_raw <= 0.0 && v.l_raw > 0.0)) {
                break;
            }
            redrawn.fetch_add(1, std::memory_order_relaxed);
        }
        sample.l_values[r] = v.l_raw;
        sample.t_values[r] = v.t_raw;
        sample.psi_values[r] = v.psi;
        if (v.psi_infinite) {
            infinite_count.fetch_add(1, std::memory_order_relaxed);
        }
    });
    sample.psi_infinite_count = infinite_count.load();
    sample.redrawn = redrawn.load();

    QuantileTable::SimParams params;
    params.reps = M;
    params.step = step;
    return assemble_result(std::move(sample), Provenance::SIMULATED_M2, params, hurst, probs);
}

namespace {

const HurstEntry* find_entry(const QuantileTable& table, double hurst, double tol) {
    const HurstEntry* best = nullptr;
    for (const HurstEntry& entry : table.entries) {
        if (std::fabs(entry.hurst - hurst) < tol) {
            best = &entry;
            break;
        }
    }
    return best;
}

double row_quantile(const HurstEntry& entry, double p) {
    constexpr double kTol = 1e-9;
    for (std::size_t i = 0; i < entry.rows.size(); ++i) {
        if (std::fabs(entry.rows[i].p - p) < kTol) {
            return entry.rows[i].q;
        }
    }
    // Linear interpolation between bracketing rows.
    for (std::size_t i = 1; i < entry.rows.size(); ++i) {
        const QuantileRow& a = entry.rows[i - 1];
        const QuantileRow& b = entry.rows[i];
        if (a.p < p && p < b.p) {
            if (a.q_infinite || b.q_infinite) {
                return kInf;
            }
            const double w = (p - a.p) / (b.p - a.p);
            return a.q + w * (b.q - a.q);
        }
    }
    throw OutOfRange("lookup: probability not bracketed by the table");
}

} // namespace

double lookup(const QuantileTable& table, double hurst, double p, LookupMode mode) {
    if (table.entries.empty()) {
        throw InvalidInput("lookup: empty table");
    }
    const HurstEntry* entry = nullptr;
    switch (mode) {
        case LookupMode::EXACT_H:
            entry = find_entry(table, hurst, 1e-9);
            if (entry == nullptr) {
                throw InvalidInput("lookup: requested hurst not tabulated");
            }
            break;
        case LookupMode::NEAREST_H: {
            double best = kInf;
            for (const HurstEntry& candidate : table.entries) {
                const double dist = std::fabs(candidate.hurst - hurst);
                if (dist < best) {
                    best = dist;
                    entry = &candidate;
                }
            }
            break;
        }
        case LookupMode::CONSERVATIVE:
            if (!(std::fabs(p - 0.90) < 1e-9 || std::fabs(p - 0.95) < 1e-9)) {
                throw Unsupported("lookup: the conservative rule covers only p in "
                                  "{0.90, 0.95}");
            }
            entry = find_entry(table, 0.95, 1e-9);
            if (entry == nullptr) {
                throw InvalidInput("lookup: conservative rule needs the H = 0.95 column");
            }
            break;
    }
    return row_quantile(*entry, p);
}

namespace {

QuantileTable embedded_table(StatisticKind kind, const std::vector<double>& hursts,
                             const std::vector<double>& probs,
                             const std::vector<std::vector<std::pair<double, double>>>& columns) {
    QuantileTable table;
    table.statistic = kind;
    table.provenance = Provenance::EMBEDDED_PAPER;
    for (std::size_t c = 0; c < hursts.size(); ++c) {
        HurstEntry entry;
        entry.hurst = hursts[c];
        for (std::size_t i = 0; i < probs.size(); ++i) {
            QuantileRow row;
            row.p = probs[i];
            row.q = columns[c][i].first;
            row.se = columns[c][i].second;
            entry.rows.push_back(row);
        }
        table.entries.push_back(std::move(entry));
    }
    table.validate();
    return table;
}

} // namespace

QuantileTable embedded_psi_table() {
    // Selected quantiles of the psi limit (Monte Carlo, M = 10^4).
    return embedded_table(
        StatisticKind::PSI, {0.5, 0.7, 0.8, 0.9, 0.95},
        {0.50, 0.80, 0.85, 0.90, 0.95},
        {
            {{2.21, 0.021}, {24.25, 0.020}, {24.67, 0.022}, {25.00, 0.041}, {25.21, 0.023}},
            {{2.19, 0.006}, {23.79, 0.019}, {24.51, 0.036}, {25.12, 0.031}, {25.92, 0.017}},
            {{2.11, 0.012}, {10.89, 0.494}, {24.14, 0.023}, {25.28, 0.054}, {26.32, 0.026}},
            {{2.20, 0.051}, {5.72, 0.132}, {8.43, 0.539}, {26.43, 0.165}, {28.02, 0.489}},
            {{2.66, 0.025}, {5.77, 0.122}, {8.30, 0.096}, {27.05, 0.248}, {33.13, 0.188}},
        });
}

QuantileTable embedded_l_table_m1() {
    // L-limit quantiles simulated by the finite-sample method (n = 10^6).
    return embedded_table(
        StatisticKind::L, {0.5, 0.7, 0.8, 0.9, 0.95},
        {0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65, 0.70, 0.75,
         0.80, 0.85, 0.90, 0.95},
        {
            {{0.01, 0.001}, {0.02, 0.000}, {0.04, 0.001}, {0.06, 0.001}, {0.10, 0.002},
             {0.13, 0.004}, {0.17, 0.005}, {0.22, 0.010}, {0.28, 0.009}, {0.35, 0.013},
             {0.43, 0.020}, {0.54, 0.005}, {0.66, 0.002}, {0.82, 0.004}, {1.00, 0.002},
             {1.23, 0.003}, {1.62, 0.002}, {2.26, 0.006}},
            {{0.02, 0.001}, {0.05, 0.000}, {0.10, 0.000}, {0.16, 0.000}, {0.24, 0.001},
             {0.34, 0.010}, {0.44, 0.018}, {0.57, 0.012}, {0.71, 0.010}, {0.91, 0.042},
             {1.14, 0.068}, {1.42, 0.009}, {1.76, 0.037}, {2.18, 0.000}, {2.77, 0.017},
             {3.56, 0.045}, {4.63, 0.035}, {6.64, 0.120}},
            {{0.03, 0.000}, {0.08, 0.004}, {0.14, 0.018}, {0.23, 0.003}, {0.34, 0.002},
             {0.48, 0.028}, {0.66, 0.005}, {0.87, 0.011}, {1.12, 0.039}, {1.43, 0.034},
             {1.79, 0.028}, {2.21, 0.024}, {2.79, 0.041}, {3.52, 0.019}, {4.48, 0.044},
             {5.85, 0.018}, {7.74, 0.060}, {11.23, 0.029}},
            {{0.04, 0.000}, {0.09, 0.005}, {0.18, 0.018}, {0.29, 0.004}, {0.36, 0.002},
             {0.50, 0.029}, {0.69, 0.005}, {0.90, 0.011}, {1.47, 0.041}, {1.61, 0.036},
             {1.88, 0.029}, {2.49, 0.026}, {3.25, 0.043}, {4.37, 0.020}, {5.01, 0.047},
             {6.66, 0.019}, {9.64, 0.063}, {15.61, 0.031}},
            {{0.05, 0.000}, {0.10, 0.004}, {0.19, 0.018}, {0.31, 0.004}, {0.39, 0.003},
             {0.51, 0.025}, {0.72, 0.005}, {0.92, 0.011}, {1.61, 0.033}, {1.75, 0.035},
             {1.92, 0.031}, {2.62, 0.027}, {3.87, 0.042}, {4.99, 0.020}, {5.36, 0.045},
             {7.11, 0.018}, {10.21, 0.063}, {19.91, 0.033}},
        });
}

QuantileTable embedded_l_table_m2() {
    // L-limit quantiles simulated on the process grid (step 2x10^-6).
    return embedded_table(
        StatisticKind::L, {0.5, 0.7, 0.8, 0.9, 0.95},
        {0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65, 0.70, 0.75,
         0.80, 0.85, 0.90, 0.95},
        {
            {{0.01, 0.001}, {0.02, 0.000}, {0.04, 0.001}, {0.07, 0.001}, {0.09, 0.002},
             {0.13, 0.004}, {0.17, 0.005}, {0.24, 0.010}, {0.28, 0.009}, {0.35, 0.013},
             {0.44, 0.020}, {0.55, 0.005}, {0.65, 0.002}, {0.80, 0.004}, {1.00, 0.002},
             {1.23, 0.003}, {1.62, 0.002}, {2.25, 0.006}},
            {{0.03, 0.001}, {0.05, 0.000}, {0.10, 0.000}, {0.16, 0.000}, {0.24, 0.001},
             {0.35, 0.010}, {0.43, 0.018}, {0.57, 0.012}, {0.71, 0.010}, {0.97, 0.042},
             {1.13, 0.068}, {1.42, 0.009}, {1.78, 0.037}, {2.18, 0.000}, {2.74, 0.017},
             {3.52, 0.045}, {4.67, 0.035}, {6.68, 0.120}},
            {{0.03, 0.000}, {0.08, 0.004}, {0.15, 0.018}, {0.23, 0.003}, {0.34, 0.002},
             {0.50, 0.028}, {0.66, 0.005}, {0.85, 0.011}, {1.10, 0.039}, {1.39, 0.034},
             {1.76, 0.028}, {2.25, 0.024}, {2.82, 0.041}, {3.51, 0.019}, {4.42, 0.044},
             {5.84, 0.018}, {7.79, 0.060}, {11.19, 0.029}},
            {{0.04, 0.000}, {0.08, 0.005}, {0.18, 0.018}, {0.29, 0.004}, {0.36, 0.002},
             {0.48, 0.029}, {0.69, 0.005}, {0.90, 0.011}, {1.48, 0.041}, {1.62, 0.036},
             {1.90, 0.029}, {2.51, 0.026}, {3.28, 0.043}, {4.38, 0.020}, {5.06, 0.047},
             {6.67, 0.019}, {9.66, 0.063}, {15.63, 0.031}},
            {{0.05, 0.000}, {0.10, 0.004}, {0.19, 0.018}, {0.31, 0.004}, {0.39, 0.003},
             {0.52, 0.025}, {0.71, 0.005}, {0.93, 0.011}, {1.61, 0.033}, {1.76, 0.035},
             {1.92, 0.031}, {2.61, 0.027}, {3.87, 0.042}, {5.01, 0.020}, {5.36, 0.045},
             {7.13, 0.018}, {10.24, 0.063}, {20.00, 0.033}},
        });
}

namespace {

nlohmann::json value_to_json(double v, bool infinite) {
    if (infinite || std::isinf(v)) {
        return v < 0.0 ? "-inf" : "inf";
    }
    return v;
}

double value_from_json(const nlohmann::json& j, bool& infinite) {
    if (j.is_string()) {
        infinite = true;
        return j.get<std::string>() == "-inf" ? -kInf : kInf;
    }
    infinite = false;
    return j.get<double>();
}

} // namespace

std::string table_to_json(const QuantileTable& table) {
    nlohmann::json j;
    j["statistic"] = to_string(table.statistic);
    j["provenance"] = to_string(table.provenance);
    j["sim_params"] = {{"n", table.sim_params.n},
                       {"reps", table.sim_params.reps},
                       {"step", table.sim_params.step}};
    j["entries"] = nlohmann::json::array();
    for (const HurstEntry& entry : table.entries) {
        nlohmann::json e;
        e["hurst"] = entry.hurst;
        e["rows"] = nlohmann::json::array();
        for (const QuantileRow& row : entry.rows) {
            e["rows"].push_back({{"p", row.p},
                                 {"q", value_to_json(row.q, row.q_infinite)},
                                 {"se", value_to_json(row.se, row.se_infinite)}});
        }
        j["entries"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

QuantileTable table_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw DataError(std::string("quantile table: ") + err.what());
    }
    QuantileTable table;
    try {
        table.statistic = statistic_kind_from_string(j.at("statistic").get<std::string>());
        table.provenance = provenance_from_string(j.at("provenance").get<std::string>());
        const auto& sp = j.at("sim_params");
        table.sim_params.n = sp.at("n").get<std::size_t>();
        table.sim_params.reps = sp.at("reps").get<std::size_t>();
        table.sim_params.step = sp.at("step").get<double>();
        for (const auto& e : j.at("entries")) {
            HurstEntry entry;
            entry.hurst = e.at("hurst").get<double>();
            for (const auto& r : e.at("rows")) {
                QuantileRow row;
                row.p = r.at("p").get<double>();
                row.q = value_from_json(r.at("q"), row.q_infinite);
                row.se = value_from_json(r.at("se"), row.se_infinite);
                entry.rows.push_back(row);
            }
            table.entries.push_back(std::move(entry));
        }
    } catch (const nlohmann::json::exception& err) {
        throw DataError(std::string("quantile table: ") + err.what());
    }
    table.validate();
    return table;
}

} // namespace monotrend
