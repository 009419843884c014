#include "dualnorm/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dualnorm {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_decimal(const std::string& text, const std::string& path) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError(path + ": not a decimal: \"" + text + "\"");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used])))
    ++used;
  if (used != text.size())
    throw ValidationError(path + ": not a decimal: \"" + text + "\"");
  return value;
}

std::vector<std::string> read_nonempty_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path + ": cannot open");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

Eigen::VectorXd read_vector_csv(const std::string& path) {
  const auto lines = read_nonempty_lines(path);
  if (lines.empty()) throw ValidationError(path + ": empty vector file");
  Eigen::VectorXd v(static_cast<Eigen::Index>(lines.size()));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (fields.size() != 1)
      throw ValidationError(path + ": expected one column, got " +
                            std::to_string(fields.size()) + " on line " +
                            std::to_string(i + 1));
    v[static_cast<Eigen::Index>(i)] = parse_decimal(fields[0], path);
  }
  return v;
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  const auto lines = read_nonempty_lines(path);
  if (lines.empty()) throw ValidationError(path + ": empty matrix file");
  const auto first = split_fields(lines[0]);
  const auto cols = static_cast<Eigen::Index>(first.size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(lines.size()), cols);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    if (static_cast<Eigen::Index>(fields.size()) != cols)
      throw ValidationError(path + ": ragged row on line " + std::to_string(i + 1));
    for (Eigen::Index j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), j) = parse_decimal(fields[j], path);
  }
  return m;
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

double quantile_linear(std::vector<double> values, double h) {
  if (values.empty()) throw ValidationError("quantile of empty sample");
  h = std::clamp(h, 0.0, 1.0);
  std::sort(values.begin(), values.end());
  const double pos = h * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

BoxStats box_stats(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("box_stats of empty sample");
  BoxStats stats;
  stats.q1 = quantile_linear(values, 0.25);
  stats.median = quantile_linear(values, 0.5);
  stats.q3 = quantile_linear(values, 0.75);
  const double iqr = stats.q3 - stats.q1;
  const double lo_fence = stats.q1 - 1.5 * iqr;
  const double hi_fence = stats.q3 + 1.5 * iqr;
  stats.whisker_low = stats.q3;
  stats.whisker_high = stats.q1;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      stats.outliers.push_back(v);
      continue;
    }
    stats.whisker_low = std::min(stats.whisker_low, v);
    stats.whisker_high = std::max(stats.whisker_high, v);
  }
  std::sort(stats.outliers.begin(), stats.outliers.end());
  return stats;
}

namespace {

std::string xml_escape(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string short_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3g", value);
  return buffer;
}

}  // namespace

void write_boxplot_svg(const std::string& path,
                       const std::vector<std::string>& labels,
                       const std::vector<std::vector<double>>& cells,
                       const std::string& title, const std::string& y_label) {
  if (cells.empty()) throw ValidationError("boxplot: no cells to draw");
  if (labels.size() != cells.size())
    throw ValidationError("boxplot: " + std::to_string(labels.size()) +
                          " labels for " + std::to_string(cells.size()) + " cells");
  for (const auto& cell : cells)
    if (cell.empty()) throw ValidationError("boxplot: empty cell");

  std::vector<BoxStats> stats;
  stats.reserve(cells.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& cell : cells) {
    stats.push_back(box_stats(cell));
    lo = std::min(lo, *std::min_element(cell.begin(), cell.end()));
    hi = std::max(hi, *std::max_element(cell.begin(), cell.end()));
  }
  if (lo == hi) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double width = 120.0 + 70.0 * static_cast<double>(cells.size());
  const double height = 420.0;
  const double plot_left = 90.0, plot_right = width - 20.0;
  const double plot_top = 50.0, plot_bottom = height - 60.0;
  const auto y_of = [&](double v) {
    return plot_bottom - (v - lo) / (hi - lo) * (plot_bottom - plot_top);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << xml_escape(title) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (plot_top + plot_bottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "transform=\"rotate(-90 18 "
      << (plot_top + plot_bottom) / 2 << ")\">" << xml_escape(y_label)
      << "</text>\n";

  // y axis with 5 ticks
  svg << "<line x1=\"" << plot_left << "\" y1=\"" << plot_top << "\" x2=\""
      << plot_left << "\" y2=\"" << plot_bottom
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = lo + (hi - lo) * t / 4.0;
    const double y = y_of(v);
    svg << "<line x1=\"" << plot_left - 5 << "\" y1=\"" << y << "\" x2=\""
        << plot_left << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << plot_left - 9 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << short_number(v) << "</text>\n";
  }

  const double slot = (plot_right - plot_left) / static_cast<double>(cells.size());
  const double box_w = std::min(36.0, slot * 0.6);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const BoxStats& s = stats[i];
    const double cx = plot_left + slot * (static_cast<double>(i) + 0.5);
    const double x0 = cx - box_w / 2, x1 = cx + box_w / 2;
    // whiskers
    svg << "<line x1=\"" << cx << "\" y1=\"" << y_of(s.whisker_low)
        << "\" x2=\"" << cx << "\" y2=\"" << y_of(s.q1)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << cx << "\" y1=\"" << y_of(s.q3) << "\" x2=\"" << cx
        << "\" y2=\"" << y_of(s.whisker_high) << "\" stroke=\"black\"/>\n";
    for (double wv : {s.whisker_low, s.whisker_high})
      svg << "<line x1=\"" << cx - box_w / 4 << "\" y1=\"" << y_of(wv)
          << "\" x2=\"" << cx + box_w / 4 << "\" y2=\"" << y_of(wv)
          << "\" stroke=\"black\"/>\n";
    // box and median
    svg << "<rect x=\"" << x0 << "\" y=\"" << y_of(s.q3) << "\" width=\""
        << box_w << "\" height=\"" << y_of(s.q1) - y_of(s.q3)
        << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << x0 << "\" y1=\"" << y_of(s.median) << "\" x2=\""
        << x1 << "\" y2=\"" << y_of(s.median)
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    for (double o : s.outliers)
      svg << "<circle cx=\"" << cx << "\" cy=\"" << y_of(o)
          << "\" r=\"2.2\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << cx << "\" y=\"" << plot_bottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << xml_escape(labels[i]) << "</text>\n";
  }
  svg << "<line x1=\"" << plot_left << "\" y1=\"" << plot_bottom << "\" x2=\""
      << plot_right << "\" y2=\"" << plot_bottom
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw ValidationError(path + ": cannot open for writing");
  out << svg.str();
  if (!out) throw ValidationError(path + ": write failed");
}

}  // namespace dualnorm
