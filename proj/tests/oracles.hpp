#pragma once

// Brute-force reference implementations used only by the test suite.
// Each oracle is written independently of the library code paths it
// checks: chord enumeration instead of a hull scan, exhaustive partition
// search instead of cumulative-sum geometry, and a classical
// pool-adjacent-violators block merge instead of minorant slopes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace oracle {

/// Greatest convex minorant values by chord enumeration: the lower convex
/// hull at abscissa x_j is the minimum over all pairs i <= j <= k of the
/// chord from point i to point k evaluated at x_j.  O(n^3) overall.
inline std::vector<double> gcm_values(const std::vector<double>& xs,
                                      const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        double best = ys[j];
        for (std::size_t i = 0; i <= j; ++i) {
            for (std::size_t k = j; k < n; ++k) {
                double value;
                if (i == k) {
                    value = ys[i];
                } else {
                    const double w = (xs[j] - xs[i]) / (xs[k] - xs[i]);
                    value = ys[i] + w * (ys[k] - ys[i]);
                }
                best = std::min(best, value);
            }
        }
        out[j] = best;
    }
    return out;
}

/// All ways to cut 0..n-1 into consecutive blocks, as sorted vectors of
/// block-end indices (inclusive).  2^(n-1) partitions.
inline std::vector<std::vector<std::size_t>> consecutive_partitions(std::size_t n) {
    std::vector<std::vector<std::size_t>> all;
    const std::size_t masks = n == 0 ? 0 : (std::size_t{1} << (n - 1));
    for (std::size_t mask = 0; mask < masks; ++mask) {
        std::vector<std::size_t> ends;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                ends.push_back(i);
            }
        }
        ends.push_back(n - 1);
        all.push_back(std::move(ends));
    }
    return all;
}

inline double block_mean(const std::vector<double>& ys, std::size_t first, std::size_t last) {
    double sum = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        sum += ys[i];
    }
    return sum / static_cast<double>(last - first + 1);
}

/// Exhaustive isotonic regression: over every consecutive-block partition
/// whose block means are non-decreasing, take the blockwise-mean vector
/// with the smallest squared error.  The optimum is such a candidate and
/// every candidate is feasible, so the minimum is exact.
inline std::vector<double> isotonic_fit(const std::vector<double>& ys) {
    const std::size_t n = ys.size();
    std::vector<double> best_fit;
    double best_sse = std::numeric_limits<double>::infinity();
    for (const auto& ends : consecutive_partitions(n)) {
        std::vector<double> fit(n);
        bool feasible = true;
        double previous = -std::numeric_limits<double>::infinity();
        std::size_t first = 0;
        for (std::size_t last : ends) {
            const double mean = block_mean(ys, first, last);
            if (mean < previous) {
                feasible = false;
                break;
            }
            for (std::size_t i = first; i <= last; ++i) {
                fit[i] = mean;
            }
            previous = mean;
            first = last + 1;
        }
        if (!feasible) {
            continue;
        }
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = ys[i] - fit[i];
            sse += d * d;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_fit = std::move(fit);
        }
    }
    return best_fit;
}

/// Exhaustive one-sided constrained fit: the minimizer over non-decreasing
/// vectors bounded above (upper = true) or below by the cap.  Candidate
/// levels are the block means clipped at the cap; the true optimum takes
/// exactly this form on its level sets.
inline std::vector<double> isotonic_fit_capped(const std::vector<double>& ys, double cap,
                                               bool upper) {
    const std::size_t n = ys.size();
    std::vector<double> best_fit;
    double best_sse = std::numeric_limits<double>::infinity();
    for (const auto& ends : consecutive_partitions(n)) {
        std::vector<double> fit(n);
        bool feasible = true;
        double previous = -std::numeric_limits<double>::infinity();
        std::size_t first = 0;
        for (std::size_t last : ends) {
            double level = block_mean(ys, first, last);
            level = upper ? std::min(level, cap) : std::max(level, cap);
            if (level < previous) {
                feasible = false;
                break;
            }
            for (std::size_t i = first; i <= last; ++i) {
                fit[i] = level;
            }
            previous = level;
            first = last + 1;
        }
        if (!feasible) {
            continue;
        }
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = ys[i] - fit[i];
            sse += d * d;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_fit = std::move(fit);
        }
    }
    return best_fit;
}

/// Classical pool-adjacent-violators solver with weighted block merging;
/// used to cross-check the minorant-based fit on long inputs.
inline std::vector<double> pava(const std::vector<double>& ys) {
    const std::size_t n = ys.size();
    std::vector<double> level;
    std::vector<double> weight;
    std::vector<std::size_t> count;
    for (std::size_t i = 0; i < n; ++i) {
        level.push_back(ys[i]);
        weight.push_back(1.0);
        count.push_back(1);
        while (level.size() > 1 && level[level.size() - 2] > level.back()) {
            const double merged_weight = weight[weight.size() - 2] + weight.back();
            const double merged_level =
                (weight[weight.size() - 2] * level[level.size() - 2] +
                 weight.back() * level.back()) /
                merged_weight;
            const std::size_t merged_count = count[count.size() - 2] + count.back();
            level.pop_back();
            weight.pop_back();
            count.pop_back();
            level.back() = merged_level;
            weight.back() = merged_weight;
            count.back() = merged_count;
        }
    }
    std::vector<double> fit;
    fit.reserve(n);
    for (std::size_t b = 0; b < level.size(); ++b) {
        for (std::size_t r = 0; r < count[b]; ++r) {
            fit.push_back(level[b]);
        }
    }
    return fit;
}

} // namespace oracle
