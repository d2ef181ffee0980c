#pragma once

#include <cstddef>
#include <vector>

namespace monotrend {

/// Observations y_1..y_n on the uniform design t_i = i/n.
struct Series {
    std::vector<double> ys;

    std::size_t n() const { return ys.size(); }
};

/// One constant stretch of a monotone step fit: observation indices
/// [start, end] (0-based, inclusive) share the common level, which equals
/// the mean of the observations over the block.
struct Block {
    std::size_t start;
    std::size_t end;
    double level;
};

/// Least-squares projection of a series onto the non-decreasing cone.
struct IsotonicFit {
    std::vector<double> fitted;             ///< non-decreasing fitted values
    std::vector<Block> blocks;              ///< level blocks in index order
    std::vector<std::size_t> jump_indices;  ///< i (0-based) with fitted[i] > fitted[i-1]
};

/// Isotonic fit of the two segments obtained by cutting the design after
/// observation l (1-based): the "split" fit, before any clipping at a
/// constraint value.
struct SplitFit {
    std::size_t l;                 ///< 1-based size of the left segment
    IsotonicFit left;              ///< fit of y_1..y_l
    IsotonicFit right;             ///< fit of y_{l+1}..y_n (indices local to the segment)
};

/// Isotonic fit constrained to pass through a given value at t0: the
/// split fit clipped from above by theta on the left segment and from
/// below by theta on the right segment.
struct ConstrainedFit {
    std::vector<double> fitted;    ///< non-decreasing, fitted[l-1] <= theta <= fitted[l]
    double theta;                  ///< constraint value
    std::size_t l;                 ///< 1-based constraint index, l = floor(n*t0)
    double t0;                     ///< constraint location in (0,1)
};

/// Unconstrained isotonic least-squares fit, computed as the left-slope
/// process of the greatest convex minorant of the cumulative-sum diagram.
/// Throws InvalidInput for n < 2 or non-finite observations.
IsotonicFit fit_isotonic(const Series& series);

/// The constraint index l = floor(n*t0) for a location t0 in (0,1).
std::size_t constraint_index(std::size_t n, double t0);

/// Split fit at the cut index l = floor(n*t0).  Throws DegenerateConstraint
/// when either segment is empty (l == 0 or l == n).
SplitFit fit_split(const Series& series, double t0);

/// Minimizer of sum (y_i - m_i)^2 subject to
/// m_1 <= ... <= m_l <= theta <= m_{l+1} <= ... <= m_n.
/// Throws InvalidInput when t0 is outside (0,1) and DegenerateConstraint
/// when one side of the split is empty.
ConstrainedFit fit_constrained(const Series& series, double t0, double theta);

/// Left-continuous step evaluation of a fit: the value at t is fitted[i]
/// for t in (t_{i-1}, t_i].  Throws OutOfRange for t outside (0,1].
double evaluate_fit(const IsotonicFit& fit, double t);
double evaluate_fit(const ConstrainedFit& fit, double t);

} // namespace monotrend
