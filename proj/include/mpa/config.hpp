// SPDX-License-Identifier: Apache-2.0
//
// Flat key = value config files with one [section] per experiment, plus the
// range/list grammars used by the CLI flags: "A:B:STEP" ranges and
// comma-separated lists.  Flags override file values; the merged map is
// hashed into the output metadata.
#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpa::config {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// section -> key -> value
using Sections = std::map<std::string, std::map<std::string, std::string>>;

inline Sections parse(std::istream& in) {
  Sections out;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      out[section];
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) +
                               ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config: line " + std::to_string(lineno) +
                               ": empty key");
    out[section][key] = value;
  }
  return out;
}

inline Sections parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  return parse(in);
}

inline double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("config: not a number: '" + s + "'");
  }
  if (trim(s.substr(pos)) != "")
    throw std::runtime_error("config: trailing junk in number '" + s + "'");
  return v;
}

// "A:B:STEP" inclusive range, or a single value.
inline std::vector<double> parse_range(const std::string& s) {
  auto c1 = s.find(':');
  if (c1 == std::string::npos) return {to_double(s)};
  auto c2 = s.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw std::runtime_error("config: range needs A:B:STEP, got '" + s + "'");
  double a = to_double(s.substr(0, c1));
  double b = to_double(s.substr(c1 + 1, c2 - c1 - 1));
  double step = to_double(s.substr(c2 + 1));
  if (step <= 0.0 || b < a)
    throw std::runtime_error("config: bad range '" + s + "'");
  std::vector<double> out;
  for (double x = a; x <= b + 1e-9 * step; x += step) out.push_back(x);
  return out;
}

// "x,y,z" list (or a single value).
inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item)));
  if (out.empty()) throw std::runtime_error("config: empty list");
  return out;
}

// FNV-1a over the canonical "section.key=value" lines; stable across runs.
inline std::uint64_t hash(const Sections& sections) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& [sec, kv] : sections)
    for (const auto& [k, v] : kv) {
      mix(sec);
      mix(".");
      mix(k);
      mix("=");
      mix(v);
      mix("\n");
    }
  return h;
}

}  // namespace mpa::config
