#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "tflab/concentration.hpp"

namespace tflab::io {

/// 17 significant digits: doubles round-trip losslessly through the CSVs.
std::string format_double(double v);

/// Minimal CSV writer; a header row is always written first.
/// Throws ConfigError when the path is not writable.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);

 private:
  std::string path_;
  std::ofstream out_;
  size_t n_cols_;
};

void write_eigenvalue_csv(const std::string& path,
                          const std::vector<double>& values);

/// Reads the eigenvalue CSV (columns k, lambda; header mandatory).
std::vector<double> read_eigenvalue_csv(const std::string& path);

void write_matrix_csv(const std::string& path, const Eigen::MatrixXcd& m);

}  // namespace tflab::io
