#pragma once

// Curve CSV format. Row 1 holds the grid points; every further row holds one
// curve's values. Rows whose first cell is a non-numeric tag (e.g. "L", "U")
// carry m values after the tag and are returned separately. In sparse mode
// empty or NaN cells mark unobserved values.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fdepth/core.hpp"

namespace fdepth {

struct TaggedRow {
  std::string tag;
  std::vector<double> values;
};

struct CsvTable {
  GridPtr grid;
  std::vector<std::vector<double>> rows;  // NaN = unobserved (sparse mode only)
  std::vector<std::size_t> row_lines;     // 1-based source line of each row
  std::vector<TaggedRow> tagged;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      cells.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

inline bool is_nan_token(std::string_view s) {
  if (s.size() != 3 && s.size() != 4) return false;
  std::string lower;
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return lower == "nan" || lower == "+nan" || lower == "-nan";
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

[[noreturn]] inline void fail(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline CsvTable read_csv_table(std::istream& in, bool sparse = false) {
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  std::size_t m = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const auto cells = detail::split_cells(body);

    if (!table.grid) {
      std::vector<double> pts;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        double v;
        if (!detail::parse_double(cells[c], v) || !std::isfinite(v)) {
          detail::fail(lineno, "grid cell " + std::to_string(c + 1) + " is not a finite number");
        }
        pts.push_back(v);
      }
      try {
        table.grid = std::make_shared<const Grid>(std::move(pts));
      } catch (const DomainError& e) {
        detail::fail(lineno, e.what());
      }
      m = table.grid->size();
      continue;
    }

    double probe;
    const bool tagged = !cells.empty() && !cells[0].empty() &&
                        !detail::parse_double(cells[0], probe) && !detail::is_nan_token(cells[0]);
    const std::size_t offset = tagged ? 1 : 0;
    if (cells.size() != m + offset) {
      detail::fail(lineno, "expected " + std::to_string(m + offset) + " cells, found " +
                               std::to_string(cells.size()));
    }
    std::vector<double> values(m);
    for (std::size_t c = 0; c < m; ++c) {
      const auto cell = cells[c + offset];
      double v;
      if (cell.empty() || detail::is_nan_token(cell)) {
        if (!sparse) detail::fail(lineno, "missing value in column " + std::to_string(c + 1));
        v = std::numeric_limits<double>::quiet_NaN();
      } else if (!detail::parse_double(cell, v)) {
        detail::fail(lineno, "cannot parse '" + std::string(cell) + "' in column " +
                                 std::to_string(c + 1));
      } else if (!std::isfinite(v)) {
        detail::fail(lineno, "non-finite value in column " + std::to_string(c + 1));
      }
      values[c] = v;
    }
    if (tagged) {
      table.tagged.push_back({std::string(cells[0]), std::move(values)});
    } else {
      table.rows.push_back(std::move(values));
      table.row_lines.push_back(lineno);
    }
  }
  if (!table.grid) throw DataError("line 1: input is empty, expected a grid row");
  return table;
}

inline FunctionalSample to_sample(const CsvTable& table) {
  if (table.rows.empty()) throw DataError("input has a grid row but no curves");
  std::vector<Curve> curves;
  curves.reserve(table.rows.size());
  for (const auto& r : table.rows) curves.emplace_back(table.grid, r);
  return FunctionalSample(std::move(curves));
}

inline FunctionalSample read_sample(std::istream& in) { return to_sample(read_csv_table(in)); }

inline FunctionalSample read_sample_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open " + path);
  return read_sample(f);
}

inline void write_row(std::ostream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ',';
    if (std::isnan(values[i])) {
      out << "NaN";
    } else {
      out << format_double(values[i]);
    }
  }
  out << '\n';
}

inline void write_curves(std::ostream& out, const Grid& grid, const std::vector<Curve>& curves) {
  write_row(out, grid.points());
  for (const auto& c : curves) write_row(out, c.values());
}

inline void write_tagged(std::ostream& out, const std::string& tag, const Curve& c) {
  out << tag << ',';
  write_row(out, c.values());
}

inline void write_sample(std::ostream& out, const FunctionalSample& s) {
  write_curves(out, *s.grid(), s.curves());
}

}  // namespace fdepth
