// Copyright (c) the fracwave developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// CSV emission with fixed %.17g formatting so identical runs produce
// byte-identical files.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fracwave/errors.hpp"

namespace fracwave {

inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw config_error("cannot open for writing: " + path);
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << fmt_num(row[c]);
    os << "\n";
  }
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open: " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw config_error("empty csv: " + path);
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream rs(line);
    std::vector<double> row;
    while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != t.header.size()) throw config_error("ragged csv row in " + path);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace fracwave
