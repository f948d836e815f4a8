#include "kge_cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "kge/format.hpp"

namespace kge_cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  for (;;) {
    std::size_t next = line.find(delimiter, pos);
    tokens.push_back(line.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return tokens;
}

bool parse_number(const std::string& token, double& out) {
  std::string t = trim(token);
  if (t.empty()) return false;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc{} && ptr == t.data() + t.size();
}

}  // namespace

Eigen::MatrixXd read_matrix(const std::string& path, std::optional<char> delimiter) {
  std::ifstream in(path);
  if (!in) throw CsvError(path + ": cannot open file");
  char delim = delimiter.value_or(',');

  std::vector<std::vector<double>> rows;
  std::size_t arity = 0;
  std::string line;
  std::size_t line_number = 0;
  bool saw_first_row = false;

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;

    std::vector<std::string> tokens = split(line, delim);
    std::vector<double> values(tokens.size());
    std::size_t bad_column = 0;
    bool numeric = true;
    for (std::size_t c = 0; c < tokens.size(); ++c) {
      if (!parse_number(tokens[c], values[c])) {
        numeric = false;
        bad_column = c + 1;
        break;
      }
    }

    if (!saw_first_row) {
      saw_first_row = true;
      if (!numeric) continue;  // header row
      arity = tokens.size();
      rows.push_back(std::move(values));
      continue;
    }

    if (!numeric)
      throw CsvError(path + ":" + std::to_string(line_number) + ": column " +
                     std::to_string(bad_column) + ": non-numeric token '" +
                     trim(tokens[bad_column - 1]) + "'");
    if (arity == 0) {
      arity = tokens.size();
    } else if (tokens.size() != arity) {
      throw CsvError(path + ":" + std::to_string(line_number) + ": expected " +
                     std::to_string(arity) + " fields, got " + std::to_string(tokens.size()));
    }
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (!std::isfinite(values[c]))
        throw CsvError(path + ":" + std::to_string(line_number) + ": column " +
                       std::to_string(c + 1) + ": non-finite value");
    }
    rows.push_back(std::move(values));
  }

  if (rows.empty()) throw CsvError(path + ": no numeric data rows");
  // A lone header row never reaches here; arity is set by the first data row.
  for (std::size_t c = 0; c < rows.front().size(); ++c) {
    if (!std::isfinite(rows.front()[c]))
      throw CsvError(path + ":1: column " + std::to_string(c + 1) + ": non-finite value");
  }

  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(arity));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < arity; ++c)
      M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return M;
}

void write_matrix(const std::string& path, const Eigen::MatrixXd& M, char delimiter) {
  std::ofstream out(path);
  if (!out) throw CsvError(path + ": cannot open file for writing");
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j > 0) out << delimiter;
      out << kge::format_shortest(M(i, j));
    }
    out << '\n';
  }
  if (!out) throw CsvError(path + ": write failed");
}

}  // namespace kge_cli
