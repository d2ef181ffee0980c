#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "monotrend/stats.hpp"

namespace monotrend {

/// Which scalar the rows of a quantile table describe.
enum class StatisticKind { L, T, PSI };

/// Where a quantile table came from.
enum class Provenance { EMBEDDED_PAPER, SIMULATED_M1, SIMULATED_M2 };

std::string to_string(StatisticKind kind);
std::string to_string(Provenance p);
StatisticKind statistic_kind_from_string(const std::string& name);
Provenance provenance_from_string(const std::string& name);

/// One tabulated quantile: P(X <= q) = p, with a Monte Carlo standard
/// error (se_infinite marks a degenerate density window).
struct QuantileRow {
    double p;
    double q;
    double se;
    bool q_infinite = false;
    bool se_infinite = false;
};

/// Quantile rows for one dependence regime (hurst = 0.5 means SRD).
struct HurstEntry {
    double hurst;
    std::vector<QuantileRow> rows;
};

/// A table of limit-distribution quantiles, possibly covering several
/// Hurst indices.
struct QuantileTable {
    StatisticKind statistic = StatisticKind::L;
    Provenance provenance = Provenance::EMBEDDED_PAPER;
    struct SimParams {
        std::size_t n = 0;     ///< sample size per replication (method 1)
        std::size_t reps = 0;  ///< Monte Carlo replications
        double step = 0.0;     ///< grid step (method 2)
    } sim_params;
    std::vector<HurstEntry> entries;

    /// Enforces strictly increasing probabilities in (0,1) and
    /// non-decreasing quantiles within each entry.
    void validate() const;
};

/// Realized statistics from one Monte Carlo simulation of the limits.
struct LimitSample {
    std::vector<double> l_values;    ///< scaled L realizations
    std::vector<double> t_values;    ///< scaled T realizations
    std::vector<double> psi_values;  ///< psi realizations; +infinity allowed
    std::size_t psi_infinite_count = 0;
    std::size_t redrawn = 0;         ///< degenerate method-2 paths redrawn
};

struct SimulationResult {
    LimitSample sample;
    QuantileTable l_table;
    QuantileTable psi_table;
};

/// Empirical quantile of a sorted sample: sorted[ceil(p*M) - 1].
double empirical_quantile(const std::vector<double>& sorted_values, double p);

struct QuantileSe {
    double value;
    bool infinite;
};

/// Monte Carlo standard error of an empirical quantile,
/// sqrt(p(1-p)) / (sqrt(M) f-hat(q_p)), with the density estimated by a
/// finite difference across a window of ceil(sqrt(M)) order statistics.
/// A zero or non-finite spread yields the infinite flag.
/// Throws InvalidInput for M < 100 or p outside (0,1).
QuantileSe quantile_se(const std::vector<double>& values, double p);

/// Method 1: finite-sample simulation of the limits.  Each replication
/// draws y_i = i/n + e_i (IID Gaussian when hurst == 0.5, fractional
/// Gaussian noise otherwise; variance marginal_var), evaluates the
/// discrepancy statistics at t0 = 1/2 with the true value theta = 1/2,
/// and applies the known-scale normalisation: L/tau^2 under SRD, or
/// n^{-e} L / (a^2 (a/b)^e) with e = (2H-1)/(2-H), a = sigma, b = 1/2
/// under LRD.  Quantile tables are built at probs.
/// Throws InvalidInput for n < 100, M < 1, or probs not strictly
/// increasing in (0,1).
SimulationResult simulate_m1(std::size_t n, std::size_t M, double hurst, double marginal_var,
                             const std::vector<double>& probs, std::uint64_t seed,
                             unsigned threads = 0);

/// One method-2 path evaluated from a unit-variance increment stream of
/// length 2K (K grid points per side): the two-sided partial-sum process
/// W(t_k) = step^H * cumulative increments is added to the drift t^2, the
/// slope processes of the full and zero-constrained convex minorants are
/// formed, and L, T are the step-weighted sums of squared slope
/// differences.  Exposed for tests (e.g. a zero stream gives a convex
/// path with L = T = 0 and psi = +infinity).
StatValue m2_statistic(const std::vector<double>& unit_increments, double step, double hurst,
                       double grid_half_width = 2.0);

/// Method 2: grid approximation of the limit processes on
/// [-grid_half_width, grid_half_width] with the given step.  Replications
/// with T numerically zero but L positive are redrawn (counted in the
/// sample).  Throws InvalidInput for step <= 0, M < 1, or invalid probs.
SimulationResult simulate_m2(double step, std::size_t M, double hurst,
                             const std::vector<double>& probs, std::uint64_t seed,
                             unsigned threads = 0, double grid_half_width = 2.0);

/// How a Hurst index maps onto a table column.
enum class LookupMode { EXACT_H, NEAREST_H, CONSERVATIVE };

/// Quantile lookup with linear interpolation in p between tabulated rows.
///  - EXACT_H requires the hurst key to be present.
///  - NEAREST_H snaps to the closest tabulated hurst.
///  - CONSERVATIVE always reads the H = 0.95 column and is only valid for
///    p in {0.90, 0.95} (the tabulated monotonicity in H covers only
///    these levels); other p throw Unsupported.
/// Throws OutOfRange when p cannot be bracketed.
double lookup(const QuantileTable& table, double hurst, double p, LookupMode mode);

/// Embedded defaults transcribed from published Monte Carlo tables
/// (n = 10^6 / step 2x10^-6, M = 10^4).
QuantileTable embedded_psi_table();   ///< selected psi quantiles, all H columns
QuantileTable embedded_l_table_m1();  ///< L quantiles, method 1
QuantileTable embedded_l_table_m2();  ///< L quantiles, method 2

/// JSON round trip for tables: {statistic, provenance, sim_params,
/// entries:[{hurst, rows:[{p,q,se}]}]}.  Infinite values are encoded as
/// the string "inf"; serialize(parse(s)) is byte-identical.
std::string table_to_json(const QuantileTable& table);
QuantileTable table_from_json(const std::string& text);

} // namespace monotrend
