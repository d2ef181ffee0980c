#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "monotrend/isotonic.hpp"
#include "monotrend/noise.hpp"

namespace monotrend {

/// A parsed two-column (t, y) data set; ts defaults to i/n when the input
/// had a single column.
struct DataSet {
    std::vector<double> ts;
    std::vector<double> ys;
    bool had_t_column = false;

    Series series() const { return Series{ys}; }
};

/// Shortest decimal rendering of a double that parses back to the same
/// bits (parse(render(x)) == x).
std::string render_double(double x);

/// Comma-separated (t, y) or (y) rows; an optional non-numeric header
/// line is skipped.  Throws DataError with a line number on malformed
/// rows, inconsistent column counts, or empty input.
DataSet read_csv(std::istream& in, const std::string& name = "<input>");
DataSet read_csv_file(const std::string& path);

/// Writes header "t,y" and full-precision rows.
void write_csv(std::ostream& out, const std::vector<double>& ts,
               const std::vector<double>& ys);
void write_csv_file(const std::string& path, const std::vector<double>& ts,
                    const std::vector<double>& ys);

/// JSON round trip for an error-model descriptor:
/// {kind, ar, ma, hurst, frac_d, marginal_var}; absent fields keep their
/// defaults.  parse throws DataError on malformed input.
std::string spec_to_json(const DependenceSpec& spec);
DependenceSpec spec_from_json(const std::string& text);

} // namespace monotrend
