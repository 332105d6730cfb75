#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "perspectra/errors.hpp"
#include "perspectra/linalg.hpp"

#include "json.hpp"

namespace perspectra {

namespace detail {

inline double parse_decimal(const std::string& token, const char* what) {
  const char* begin = token.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0'))
    throw DataError(std::string(what) + ": '" + token + "' is not a decimal number");
  if (!std::isfinite(v)) throw DataError(std::string(what) + ": values must be finite");
  return v;
}

// splits on sep and trims token edges; interior whitespace is kept so that
// malformed tokens like "1 2" fail the full-consume number parse instead of
// silently fusing
inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::size_t a = cur.find_first_not_of(" \t\r");
    std::size_t b = cur.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : cur.substr(a, b - a + 1));
    cur.clear();
  };
  for (char c : line) {
    if (c == sep)
      flush();
    else
      cur += c;
  }
  flush();
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline bool looks_like_json(const std::string& path, const std::string& text) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return true;
  for (char c : text) {
    if (c == ' ' || c == '\n' || c == '\t' || c == '\r') continue;
    return c == '[';
  }
  return false;
}

}  // namespace detail

/// Comma-separated decimals from the command line, e.g. "1,-2.5,0".
inline Vec parse_inline_vector(const std::string& text) {
  Vec v;
  for (const auto& token : detail::split(text, ',')) {
    if (token.empty()) throw BadParam("inline vector: empty component in '" + text + "'");
    const char* begin = token.c_str();
    char* end = nullptr;
    double c = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(c))
      throw BadParam("inline vector: '" + token + "' is not a finite decimal");
    v.push_back(c);
  }
  if (v.empty()) throw BadParam("inline vector: no values");
  return v;
}

/// Row-structured numeric data: CSV (one value per line, a comma-separated
/// single line, or comma-separated rows) or a JSON array / array of arrays.
inline std::vector<std::vector<double>> read_rows(const std::string& path) {
  std::string text = detail::read_file(path);
  std::vector<std::vector<double>> rows;

  if (detail::looks_like_json(path, text)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("'" + path + "': " + e.what());
    }
    if (!j.is_array()) throw DataError("'" + path + "': expected a JSON array");
    auto to_row = [&](const nlohmann::json& a) {
      std::vector<double> row;
      for (const auto& x : a) {
        if (!x.is_number()) throw DataError("'" + path + "': non-numeric JSON entry");
        double v = x.get<double>();
        if (!std::isfinite(v)) throw DataError("'" + path + "': values must be finite");
        row.push_back(v);
      }
      return row;
    };
    if (!j.empty() && j.front().is_array()) {
      for (const auto& a : j) rows.push_back(to_row(a));
    } else {
      rows.push_back(to_row(j));
    }
  } else {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      bool blank = true;
      for (char c : line)
        if (c != ' ' && c != '\t' && c != '\r') blank = false;
      if (blank) continue;
      std::vector<double> row;
      for (const auto& token : detail::split(line, ','))
        if (!token.empty()) row.push_back(detail::parse_decimal(token, path.c_str()));
      if (!row.empty()) rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) throw DataError("'" + path + "': no data");
  return rows;
}

/// A vector: every row contributes its values in order.
inline Vec read_vector(const std::string& path) {
  Vec v;
  for (const auto& row : read_rows(path)) v.insert(v.end(), row.begin(), row.end());
  if (v.empty()) throw DataError("'" + path + "': no values");
  return v;
}

}  // namespace perspectra
