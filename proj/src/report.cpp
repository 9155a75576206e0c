#include "coevgan/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string_view>
#include <vector>

#include "coevgan/errors.hpp"

namespace coevgan {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end)
    throw ConfigError("input", "line " + std::to_string(line) + ": '" + s + "' is not a number");
  return v;
}

bool is_comment_or_blank(const std::string& line) {
  return line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string comment_block(const std::string& header, const char* prefix) {
  std::string out;
  std::istringstream lines(header);
  std::string line;
  while (std::getline(lines, line)) {
    // Headers arrive already commented for CSV; normalise to the target prefix.
    if (line.rfind("# ", 0) == 0) line = line.substr(2);
    out += prefix + line + "\n";
  }
  return out;
}

}  // namespace

void write_heatmap_csv(const HeatmapResult& h, std::ostream& out, const std::string& header) {
  h.validate();
  out << comment_block(header, "# ");
  out << "# heatmap_repetitions = " << h.repetitions << "\n";
  out << h.row_label << '\\' << h.col_label;
  for (double c : h.col_axis) out << ',' << num(c);
  out << '\n';
  for (std::size_t i = 0; i < h.row_axis.size(); ++i) {
    out << num(h.row_axis[i]);
    for (double v : h.matrix[i]) out << ',' << num(v);
    out << '\n';
  }
}

HeatmapResult read_heatmap_csv(std::istream& in) {
  HeatmapResult h;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (constexpr std::string_view marker = "# heatmap_repetitions = "; line.rfind(marker, 0) == 0) {
      h.repetitions = static_cast<int>(parse_double(line.substr(marker.size()), lineno));
      continue;
    }
    if (is_comment_or_blank(line)) continue;
    const auto cells = split(line);
    if (!have_header) {
      const auto slash = cells.front().find('\\');
      if (slash == std::string::npos) throw ConfigError("input", "line " + std::to_string(lineno) + ": missing 'rows\\cols' header");
      h.row_label = cells.front().substr(0, slash);
      h.col_label = cells.front().substr(slash + 1);
      for (std::size_t k = 1; k < cells.size(); ++k) h.col_axis.push_back(parse_double(cells[k], lineno));
      have_header = true;
      continue;
    }
    if (cells.size() != h.col_axis.size() + 1)
      throw ConfigError("input", "line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(h.col_axis.size() + 1) + " fields, got " +
                                     std::to_string(cells.size()));
    h.row_axis.push_back(parse_double(cells[0], lineno));
    std::vector<double> row;
    for (std::size_t k = 1; k < cells.size(); ++k) row.push_back(parse_double(cells[k], lineno));
    h.matrix.push_back(std::move(row));
  }
  if (!have_header || h.matrix.empty()) throw ConfigError("input", "no heatmap data found");
  try {
    h.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("input", e.what());
  }
  return h;
}

std::string render_pgm(const HeatmapResult& h, int cell_pixels, const std::string& header) {
  h.validate();
  if (cell_pixels < 1) throw ConfigError("render.cell_pixels", "must be >= 1");
  const std::size_t rows = h.row_axis.size(), cols = h.col_axis.size();
  const std::size_t width = cols * static_cast<std::size_t>(cell_pixels);
  const std::size_t height = rows * static_cast<std::size_t>(cell_pixels);
  std::string out = "P2\n" + comment_block(header, "# ");
  out += "# rows: " + h.row_label + ", columns: " + h.col_label + "\n";
  out += std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  for (std::size_t i = 0; i < rows; ++i) {
    std::string line;
    for (std::size_t j = 0; j < cols; ++j) {
      const int g = static_cast<int>(std::lround(255.0 * h.matrix[i][j]));
      for (int p = 0; p < cell_pixels; ++p) line += (line.empty() ? "" : " ") + std::to_string(g);
    }
    for (int p = 0; p < cell_pixels; ++p) out += line + "\n";
  }
  return out;
}

std::string render_heatmap_table(const HeatmapResult& h) {
  std::ostringstream out;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%8s", (h.row_label + "\\" + h.col_label).substr(0, 8).c_str());
  out << buf;
  for (double c : h.col_axis) {
    std::snprintf(buf, sizeof buf, " %6.2f", c);
    out << buf;
  }
  out << '\n';
  for (std::size_t i = 0; i < h.row_axis.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%8.2f", h.row_axis[i]);
    out << buf;
    for (double v : h.matrix[i]) {
      std::snprintf(buf, sizeof buf, " %6.2f", v);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string render_csv_table(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!is_comment_or_blank(line)) rows.push_back(split(line));
  }
  if (rows.empty()) throw ConfigError("input", "no table data found");
  std::vector<std::size_t> width;
  for (const auto& r : rows)
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (width.size() <= k) width.push_back(0);
      width[k] = std::max(width[k], r[k].size());
    }
  std::string out;
  for (const auto& r : rows) {
    std::string text;
    for (std::size_t k = 0; k < r.size(); ++k)
      text += (k ? "  " : "") + r[k] + std::string(width[k] - r[k].size(), ' ');
    text.erase(text.find_last_not_of(' ') + 1);
    out += text + "\n";
  }
  return out;
}

bool looks_like_heatmap(std::istream& in) {
  std::string line;
  while (std::getline(in, line))
    if (!is_comment_or_blank(line)) return split(line).front().find('\\') != std::string::npos;
  return false;
}

}  // namespace coevgan
