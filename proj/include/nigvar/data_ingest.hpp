// Copyright 2026 The nigvar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "nigvar/date.hpp"
#include "nigvar/error.hpp"

namespace nigvar {

/// Aligned daily market quadruple: equity index level, equity implied vol
/// (percent, annualized), 10-year yield (percent) and Treasury implied vol
/// (percent, annualized).
struct MarketQuadruple {
  std::vector<Date> dates;
  std::vector<double> spx;
  std::vector<double> vix;
  std::vector<double> yield10;
  std::vector<double> tyvix;

  std::size_t size() const noexcept { return dates.size(); }

  void validate() const {
    const std::size_t n = dates.size();
    if (spx.size() != n || vix.size() != n || yield10.size() != n || tyvix.size() != n)
      throw DataError("MarketQuadruple: series lengths differ");
    for (std::size_t i = 1; i < n; ++i)
      if (!(dates[i - 1] < dates[i]))
        throw DataError("MarketQuadruple: dates not strictly increasing at " + dates[i].to_string());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(spx[i]) || !std::isfinite(vix[i]) || !std::isfinite(yield10[i]) ||
          !std::isfinite(tyvix[i]))
        throw DataError("MarketQuadruple: non-finite value on " + dates[i].to_string());
      if (!(spx[i] > 0.0) || !(vix[i] > 0.0) || !(tyvix[i] > 0.0))
        throw DataError("MarketQuadruple: non-positive level on " + dates[i].to_string());
    }
  }

  friend bool operator==(const MarketQuadruple&, const MarketQuadruple&) = default;
};

/// Header names of the five logical columns, plus the field delimiter.
struct ColumnMapping {
  std::string date = "date";
  std::string spx = "spx_close";
  std::string vix = "vix_close";
  std::string yield10 = "ust10y_yield";
  std::string tyvix = "tyvix_close";
  char delimiter = ',';
};

struct LoadReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped = 0;
};

struct LoadedQuadruple {
  MarketQuadruple data;
  LoadReport report;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

// Splits one delimited line; double-quoted fields may contain the delimiter.
inline std::vector<std::string> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      out.emplace_back(trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.emplace_back(trim(field));
  return out;
}

inline bool is_missing(std::string_view s) {
  if (s.empty() || s == ".") return true;
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower == "na" || lower == "n/a" || lower == "nan" || lower == "null" || lower == "#n/a";
}

inline double parse_number(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
    throw DataError("line " + std::to_string(line_no) + ": unparseable number '" + std::string(s) + "'");
  return v;
}

inline void append_number(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

}  // namespace detail

/// Parses a delimited quadruple file with a header row.
///
/// Rows with any missing field are dropped and counted; the remainder is
/// sorted by date and validated.
inline LoadedQuadruple parse_quadruple(std::istream& in, const ColumnMapping& mapping = {}) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!detail::trim(line).empty()) break;
  }
  if (detail::trim(line).empty()) throw DataError("quadruple file has no header row");

  const auto header = detail::split_fields(line, mapping.delimiter);
  const std::array<const std::string*, 5> names = {&mapping.date, &mapping.spx, &mapping.vix,
                                                   &mapping.yield10, &mapping.tyvix};
  std::array<std::size_t, 5> column{};
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto it = std::find(header.begin(), header.end(), *names[k]);
    if (it == header.end()) throw DataError("quadruple file lacks required column '" + *names[k] + "'");
    column[k] = static_cast<std::size_t>(it - header.begin());
  }

  struct Row {
    Date date;
    std::array<double, 4> values;
  };
  std::vector<Row> rows;
  LoadReport report;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    ++report.rows_read;
    const auto fields = detail::split_fields(line, mapping.delimiter);
    bool missing = false;
    for (std::size_t c : column)
      if (c >= fields.size() || detail::is_missing(fields[c])) missing = true;
    if (missing) {
      ++report.rows_dropped;
      continue;
    }
    Row row;
    try {
      row.date = Date::parse(fields[column[0]]);
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    for (std::size_t k = 0; k < 4; ++k) row.values[k] = detail::parse_number(fields[column[k + 1]], line_no);
    rows.push_back(row);
  }

  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.date < b.date; });
  LoadedQuadruple out;
  out.report = report;
  MarketQuadruple& q = out.data;
  for (const Row& r : rows) {
    q.dates.push_back(r.date);
    q.spx.push_back(r.values[0]);
    q.vix.push_back(r.values[1]);
    q.yield10.push_back(r.values[2]);
    q.tyvix.push_back(r.values[3]);
  }
  q.validate();
  return out;
}

inline LoadedQuadruple load_quadruple(const std::filesystem::path& path, const ColumnMapping& mapping = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_quadruple(in, mapping);
}

/// Writes the quadruple in the format parse_quadruple() reads. Numbers use
/// the shortest representation that round-trips exactly.
inline void write_quadruple(std::ostream& out, const MarketQuadruple& q, const ColumnMapping& mapping = {}) {
  q.validate();
  const char d = mapping.delimiter;
  std::string text = mapping.date + d + mapping.spx + d + mapping.vix + d + mapping.yield10 + d + mapping.tyvix + '\n';
  for (std::size_t i = 0; i < q.size(); ++i) {
    text += q.dates[i].to_string();
    for (double v : {q.spx[i], q.vix[i], q.yield10[i], q.tyvix[i]}) {
      text += d;
      detail::append_number(text, v);
    }
    text += '\n';
  }
  out << text;
}

/// r_j = ln(levels[j+1] / levels[j]).
inline std::vector<double> log_returns(std::span<const double> levels) {
  if (levels.size() < 2) throw DataError("log_returns: need at least two levels");
  for (double v : levels)
    if (!(v > 0.0) || !std::isfinite(v)) throw DataError("log_returns: levels must be positive");
  std::vector<double> out(levels.size() - 1);
  for (std::size_t j = 0; j + 1 < levels.size(); ++j) out[j] = std::log(levels[j + 1] / levels[j]);
  return out;
}

/// d_j = levels[j+1] - levels[j].
inline std::vector<double> differences(std::span<const double> levels) {
  if (levels.size() < 2) throw DataError("differences: need at least two levels");
  std::vector<double> out(levels.size() - 1);
  for (std::size_t j = 0; j + 1 < levels.size(); ++j) out[j] = levels[j + 1] - levels[j];
  return out;
}

}  // namespace nigvar
