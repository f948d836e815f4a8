#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "kge/error.hpp"

namespace kge_cli {

// Malformed or unreadable tabular data; diagnostics name the file and, where
// applicable, the 1-based line and column (field index).
class CsvError : public kge::Error {
 public:
  explicit CsvError(const std::string& msg) : kge::Error(msg) {}
};

// Reads a numeric matrix, one observation per row. The delimiter defaults to
// a comma. A header row is assumed if and only if any token of the first row
// fails to parse as a number; every later row must be fully numeric and match
// the first data row's arity.
Eigen::MatrixXd read_matrix(const std::string& path, std::optional<char> delimiter = std::nullopt);

// Writes rows with shortest round-trip number formatting and no header.
void write_matrix(const std::string& path, const Eigen::MatrixXd& M, char delimiter = ',');

}  // namespace kge_cli
