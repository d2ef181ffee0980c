#pragma once

#include <cstddef>
#include <vector>

namespace monotrend {

/// A finite sequence of points with strictly increasing abscissae.
struct PointSequence {
    std::vector<double> xs; ///< strictly increasing abscissae
    std::vector<double> ys; ///< ordinates, same length as xs
};

/// The greatest convex minorant (GCM) of the linear interpolant of a
/// point sequence, represented by its knots.  Between consecutive knots
/// the minorant is affine; at each knot it touches the input ordinate.
struct ConvexMinorant {
    std::vector<double> xs;                  ///< abscissae of the input points
    std::vector<std::size_t> knot_indices;   ///< increasing index subset of the input
    std::vector<double> knot_values;         ///< ordinates at the knots (== input there)
    std::vector<double> values;              ///< minorant evaluated at every input abscissa
};

/// Compute the greatest convex minorant of the linear interpolant of the
/// points: the pointwise supremum of all convex functions lying below it.
/// Collinear boundary points are kept as knots, so a convex input is
/// returned verbatim with every point a knot.
///
/// Throws InvalidInput on an empty sequence or non-increasing abscissae.
ConvexMinorant gcm(const PointSequence& points);

/// GCM of the sub-sequence points[lo_index..hi_index] (inclusive).
/// Throws InvalidInput when the index range is invalid.
ConvexMinorant gcm_restricted(const PointSequence& points, std::size_t lo_index,
                              std::size_t hi_index);

/// Left-continuous slope process of a convex minorant at the query
/// abscissae: for a query x the slope of the segment covering (x_prev, x]
/// is returned; at the leftmost abscissa the first segment slope is used.
/// A single-point (degenerate) minorant has slope 0 by convention.
///
/// Throws OutOfRange when a query lies outside [min xs, max xs].
std::vector<double> left_slopes(const ConvexMinorant& minorant,
                                const std::vector<double>& query_xs);

} // namespace monotrend
