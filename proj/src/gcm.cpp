#include "monotrend/gcm.hpp"

#include <algorithm>
#include <cstddef>

#include "monotrend/errors.hpp"

namespace monotrend {

namespace {

void validate(const PointSequence& points) {
    if (points.xs.empty() || points.ys.empty()) {
        throw InvalidInput("gcm: empty point sequence");
    }
    if (points.xs.size() != points.ys.size()) {
        throw InvalidInput("gcm: xs and ys lengths differ");
    }
    for (std::size_t i = 1; i < points.xs.size(); ++i) {
        if (!(points.xs[i] > points.xs[i - 1])) {
            throw InvalidInput("gcm: abscissae must be strictly increasing");
        }
    }
}

// Build the minorant for points[lo..hi] (inclusive).  Knot indices are
// reported in the coordinates of the full input sequence.
ConvexMinorant build(const PointSequence& points, std::size_t lo, std::size_t hi) {
    const auto& xs = points.xs;
    const auto& ys = points.ys;

    // Lower-hull scan.  A knot b between neighbours a and c is removed when
    // the slope into b strictly exceeds the slope out of b; collinear
    // points are retained so that a convex input keeps all its knots.
    std::vector<std::size_t> stack;
    stack.reserve(hi - lo + 1);
    for (std::size_t i = lo; i <= hi; ++i) {
        while (stack.size() >= 2) {
            const std::size_t a = stack[stack.size() - 2];
            const std::size_t b = stack[stack.size() - 1];
            // slope(a,b) > slope(b,i)  <=>  concave corner at b
            const double lhs = (ys[b] - ys[a]) * (xs[i] - xs[b]);
            const double rhs = (ys[i] - ys[b]) * (xs[b] - xs[a]);
            if (lhs > rhs) {
                stack.pop_back();
            } else {
                break;
            }
        }
        stack.push_back(i);
    }

    ConvexMinorant out;
    out.xs.assign(xs.begin() + static_cast<std::ptrdiff_t>(lo),
                  xs.begin() + static_cast<std::ptrdiff_t>(hi + 1));
    out.knot_indices = std::move(stack);
    out.knot_values.reserve(out.knot_indices.size());
    for (std::size_t k : out.knot_indices) {
        out.knot_values.push_back(ys[k]);
    }

    // Evaluate the piecewise-linear minorant at every input abscissa.
    out.values.resize(hi - lo + 1);
    std::size_t seg = 0; // segment between knot seg and knot seg+1
    for (std::size_t i = lo; i <= hi; ++i) {
        while (seg + 1 < out.knot_indices.size() && out.knot_indices[seg + 1] < i) {
            ++seg;
        }
        if (i == out.knot_indices[seg]) {
            out.values[i - lo] = out.knot_values[seg];
        } else {
            const std::size_t k0 = out.knot_indices[seg];
            const std::size_t k1 = out.knot_indices[seg + 1];
            const double slope = (ys[k1] - ys[k0]) / (xs[k1] - xs[k0]);
            out.values[i - lo] = ys[k0] + slope * (xs[i] - xs[k0]);
        }
    }
    return out;
}

} // namespace

ConvexMinorant gcm(const PointSequence& points) {
    validate(points);
    return build(points, 0, points.xs.size() - 1);
}

ConvexMinorant gcm_restricted(const PointSequence& points, std::size_t lo_index,
                              std::size_t hi_index) {
    validate(points);
    if (lo_index > hi_index || hi_index >= points.xs.size()) {
        throw InvalidInput("gcm_restricted: invalid index range");
    }
    return build(points, lo_index, hi_index);
}

std::vector<double> left_slopes(const ConvexMinorant& minorant,
                                const std::vector<double>& query_xs) {
    const auto& ki = minorant.knot_indices;
    const auto& kv = minorant.knot_values;
    // Knot abscissae in local coordinates of the minorant.
    const double x_lo = minorant.xs.front();
    const double x_hi = minorant.xs.back();
    const std::size_t base = ki.front();

    std::vector<double> slopes;
    slopes.reserve(query_xs.size());
    std::vector<double> kx(ki.size());
    for (std::size_t j = 0; j < ki.size(); ++j) {
        kx[j] = minorant.xs[ki[j] - base];
    }
    for (double q : query_xs) {
        if (q < x_lo || q > x_hi) {
            throw OutOfRange("left_slopes: query outside the minorant domain");
        }
        if (ki.size() == 1) {
            slopes.push_back(0.0); // degenerate single-point minorant
            continue;
        }
        // Left-continuous: the segment whose half-open span (x_{j}, x_{j+1}]
        // contains q; the leftmost abscissa takes the first segment slope.
        std::size_t j =
            static_cast<std::size_t>(std::lower_bound(kx.begin(), kx.end(), q) - kx.begin());
        if (j == 0) {
            j = 1; // q at (or numerically below) the left endpoint
        }
        slopes.push_back((kv[j] - kv[j - 1]) / (kx[j] - kx[j - 1]));
    }
    return slopes;
}

} // namespace monotrend
