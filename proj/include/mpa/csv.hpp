// SPDX-License-Identifier: Apache-2.0
//
// Minimal CSV emission: comma separated, '.' decimal point, LF line endings,
// mandatory header row.  Numbers are printed with a fixed %.10g so identical
// inputs give byte-identical files.
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpa::csv {

inline std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

class Writer {
 public:
  explicit Writer(std::vector<std::string> header) : header_(std::move(header)) {
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (i) body_ += ',';
      body_ += header_[i];
    }
    body_ += '\n';
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size())
      throw std::runtime_error("csv: row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) body_ += ',';
      body_ += quoted(cells[i]);
    }
    body_ += '\n';
  }

  const std::string& str() const { return body_; }

  void write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("csv: cannot open " + path);
    out << body_;
  }

 private:
  static std::string quoted(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
    return out;
  }

  std::vector<std::string> header_;
  std::string body_;
};

}  // namespace mpa::csv
