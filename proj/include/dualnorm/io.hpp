#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "dualnorm/errors.hpp"

namespace dualnorm {

/// Single-column CSV of decimals -> vector.
Eigen::VectorXd read_vector_csv(const std::string& path);

/// CSV rows -> matrix (all rows must have the same arity).
Eigen::MatrixXd read_matrix_csv(const std::string& path);

/// RFC-4180 quoting: fields containing comma, quote or newline are wrapped
/// in double quotes with embedded quotes doubled.
std::string csv_field(const std::string& raw);

/// Shortest-round-trip decimal rendering used for all CSV numbers.
std::string format_double(double value);

/// Quantile with linear interpolation between order statistics (the R
/// type-7 rule): for sorted v of size n, q(h) interpolates at (n-1)*h.
double quantile_linear(std::vector<double> values, double h);

/// Five-number summary for one box: quartiles, whiskers at the most extreme
/// data within 1.5*IQR of the box, and the points beyond them.
struct BoxStats {
  double q1 = 0, median = 0, q3 = 0;
  double whisker_low = 0, whisker_high = 0;
  std::vector<double> outliers;
};

BoxStats box_stats(const std::vector<double>& values);

/// One box per labelled cell. Throws ValidationError on empty input; no file
/// is written in that case.
void write_boxplot_svg(const std::string& path,
                       const std::vector<std::string>& labels,
                       const std::vector<std::vector<double>>& cells,
                       const std::string& title, const std::string& y_label);

}  // namespace dualnorm
