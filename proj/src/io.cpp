#include "tflab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tflab/errors.hpp"

namespace tflab::io {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary), n_cols_(header.size()) {
  if (!out_) throw ConfigError("CsvWriter: cannot write " + path);
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_) {
    throw ConfigError("CsvWriter: column count mismatch for " + path_);
  }
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  out_ << line;
}

void write_eigenvalue_csv(const std::string& path,
                          const std::vector<double>& values) {
  CsvWriter csv(path, {"k", "lambda"});
  for (size_t k = 0; k < values.size(); ++k) {
    csv.row({std::to_string(k), format_double(values[k])});
  }
}

std::vector<double> read_eigenvalue_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open eigenvalue CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("eigenvalue CSV is empty: " + path);
  }
  std::vector<double> values;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("eigenvalue CSV: bad row " + std::to_string(line_no));
    }
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  return values;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXcd& m) {
  CsvWriter csv(path, {"m", "n", "re", "im"});
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) {
      csv.row({std::to_string(i), std::to_string(j),
               format_double(m(i, j).real()), format_double(m(i, j).imag())});
    }
  }
}

}  // namespace tflab::io
