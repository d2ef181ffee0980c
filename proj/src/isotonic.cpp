#include "monotrend/isotonic.hpp"

#include <cmath>
#include <cstddef>

#include "monotrend/errors.hpp"
#include "monotrend/gcm.hpp"

namespace monotrend {

namespace {

// Isotonic fit of ys[first..last] (inclusive) via the cumulative-sum
// diagram: the fitted value at each index is the slope of the greatest
// convex minorant of (i, S_i) over the covering segment, which equals the
// block mean of the pooled observations.  The cumulative sums are formed
// locally so that a segment fit depends only on its own observations.
IsotonicFit fit_range(const std::vector<double>& ys, std::size_t first, std::size_t last) {
    const std::size_t m = last - first + 1;
    PointSequence diagram;
    diagram.xs.resize(m + 1);
    diagram.ys.resize(m + 1);
    diagram.xs[0] = 0.0;
    diagram.ys[0] = 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        s += ys[first + i];
        diagram.xs[i + 1] = static_cast<double>(i + 1);
        diagram.ys[i + 1] = s;
    }
    const ConvexMinorant hull = gcm(diagram);

    IsotonicFit fit;
    fit.fitted.resize(m);
    fit.blocks.reserve(hull.knot_indices.size());
    for (std::size_t j = 0; j + 1 < hull.knot_indices.size(); ++j) {
        const std::size_t k0 = hull.knot_indices[j];
        const std::size_t k1 = hull.knot_indices[j + 1];
        const double level = (hull.knot_values[j + 1] - hull.knot_values[j]) /
                             static_cast<double>(k1 - k0);
        // Diagram knots k0 < k1 pool observations k0..k1-1 (0-based).
        fit.blocks.push_back(Block{k0, k1 - 1, level});
        for (std::size_t i = k0; i < k1; ++i) {
            fit.fitted[i] = level;
        }
    }
    for (std::size_t i = 1; i < m; ++i) {
        if (fit.fitted[i] > fit.fitted[i - 1]) {
            fit.jump_indices.push_back(i);
        }
    }
    return fit;
}

void validate(const Series& series) {
    if (series.n() < 2) {
        throw InvalidInput("isotonic: need at least two observations");
    }
    for (double y : series.ys) {
        if (!std::isfinite(y)) {
            throw InvalidInput("isotonic: observations must be finite");
        }
    }
}

} // namespace

IsotonicFit fit_isotonic(const Series& series) {
    validate(series);
    return fit_range(series.ys, 0, series.n() - 1);
}

std::size_t constraint_index(std::size_t n, double t0) {
    if (!(t0 > 0.0 && t0 < 1.0)) {
        throw InvalidInput("constraint location t0 must lie in (0,1)");
    }
    // floor(n*t0) with a snap tolerance so that locations meant to hit a
    // design point exactly are not pushed off by representation error.
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * t0 + 1e-9));
}

SplitFit fit_split(const Series& series, double t0) {
    validate(series);
    const std::size_t n = series.n();
    const std::size_t l = constraint_index(n, t0);
    if (l == 0 || l >= n) {
        throw DegenerateConstraint("split fit: constraint leaves an empty segment");
    }
    SplitFit split;
    split.l = l;
    split.left = fit_range(series.ys, 0, l - 1);
    split.right = fit_range(series.ys, l, n - 1);
    return split;
}

ConstrainedFit fit_constrained(const Series& series, double t0, double theta) {
    const SplitFit split = fit_split(series, t0);
    const std::size_t n = series.n();

    ConstrainedFit fit;
    fit.theta = theta;
    fit.l = split.l;
    fit.t0 = t0;
    fit.fitted.resize(n);
    for (std::size_t i = 0; i < split.l; ++i) {
        fit.fitted[i] = std::min(split.left.fitted[i], theta);
    }
    for (std::size_t i = split.l; i < n; ++i) {
        fit.fitted[i] = std::max(split.right.fitted[i - split.l], theta);
    }
    return fit;
}

namespace {

std::size_t step_index(std::size_t n, double t) {
    if (!(t > 0.0 && t <= 1.0)) {
        throw OutOfRange("evaluate_fit: location must lie in (0,1]");
    }
    // Left-continuous step convention: t in (t_{i-1}, t_i] maps to index i.
    double idx = std::ceil(static_cast<double>(n) * t - 1e-9);
    if (idx < 1.0) {
        idx = 1.0;
    }
    std::size_t i = static_cast<std::size_t>(idx);
    if (i > n) {
        i = n;
    }
    return i;
}

} // namespace

double evaluate_fit(const IsotonicFit& fit, double t) {
    return fit.fitted[step_index(fit.fitted.size(), t) - 1];
}

double evaluate_fit(const ConstrainedFit& fit, double t) {
    return fit.fitted[step_index(fit.fitted.size(), t) - 1];
}

} // namespace monotrend
