#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rwl1/types.hpp"

namespace rwl1 {

/// 17 significant digits: lossless for IEEE doubles, so written files
/// round-trip exactly.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<double> parse_csv_row(const std::string& line,
                                         const std::string& where) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    const std::string cell = line.substr(pos, comma - pos);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str())
      throw std::runtime_error(where + ": unparseable cell '" + cell + "'");
    out.push_back(v);
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return out;
}

/// Matrix CSV: one row per matrix row, comma-separated, no header.
inline void write_matrix_csv(const std::string& path, const Matrix& mat) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  for (Eigen::Index i = 0; i < mat.rows(); ++i) {
    for (Eigen::Index j = 0; j < mat.cols(); ++j) {
      if (j) f << ',';
      f << format_double(mat(i, j));
    }
    f << '\n';
  }
}

/// Vector CSV: a single column, no header.
inline void write_vector_csv(const std::string& path, const Vector& v) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  for (Eigen::Index i = 0; i < v.size(); ++i) f << format_double(v[i]) << '\n';
}

inline Matrix read_matrix_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(parse_csv_row(line, path));
    if (rows.back().size() != rows.front().size())
      throw std::runtime_error(path + ": ragged rows");
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty file");
  Matrix mat(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) mat(i, j) = rows[i][j];
  return mat;
}

inline Vector read_vector_csv(const std::string& path) {
  Matrix mat = read_matrix_csv(path);
  if (mat.cols() != 1)
    throw std::runtime_error(path + ": expected a single-column vector file");
  return mat.col(0);
}

}  // namespace rwl1
