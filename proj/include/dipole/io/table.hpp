#pragma once

// Versioned delimited tables:
//   # dipole.<schema> v<version>
//   col1,col2,...
//   rows...
// Reals are written with 18 significant digits so they reparse exactly.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dipole/errors.hpp"
#include "dipole/io/config.hpp"

namespace dipole::io {

inline constexpr int schema_version = 1;

struct Table {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

inline std::string format_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

/// Six significant digits, for summaries meant for people.
inline std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string format_int(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

inline std::string format_bool(bool b) { return b ? "true" : "false"; }

inline char delimiter(Format f) { return f == Format::tsv ? '\t' : ','; }

inline void write_table(std::ostream& os, const Table& t, Format f) {
  const char d = delimiter(f);
  os << "# dipole." << t.schema << " v" << schema_version << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? std::string(1, d) : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << d;
      os << row[i];
    }
    os << '\n';
  }
}

inline Table read_table(std::istream& is, Format f) {
  const char d = delimiter(f);
  auto split = [d](const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, d)) out.push_back(cell);
    if (!line.empty() && line.back() == d) out.emplace_back();
    return out;
  };
  Table t;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# dipole.", 0) != 0)
    throw config_error("read_table: missing '# dipole.<schema>' header");
  const auto sp = line.find(' ', 9);
  t.schema = line.substr(9, sp == std::string::npos ? std::string::npos : sp - 9);
  if (!std::getline(is, line)) throw config_error("read_table: missing column line");
  t.columns = split(line);
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto row = split(line);
    if (row.size() != t.columns.size()) throw config_error("read_table: ragged row '" + line + "'");
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw config_error("parse_real: '" + s + "'");
  return v;
}

} // namespace dipole::io
