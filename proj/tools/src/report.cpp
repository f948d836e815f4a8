#include "kge_cli/report.hpp"

#include <cmath>
#include <limits>

#include "kge/error.hpp"
#include "kge/format.hpp"

namespace kge_cli {

nlohmann::json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j == "inf") return std::numeric_limits<double>::infinity();
    if (j == "-inf") return -std::numeric_limits<double>::infinity();
    throw kge::InputError("report: unexpected string where a number belongs");
  }
  return j.get<double>();
}

nlohmann::json to_json(const RunReport& report, bool include_timing) {
  nlohmann::json j;
  j["command"] = report.command;
  j["config"] = report.config;
  j["results"] = report.results;
  j["library_version"] = report.library_version;
  if (include_timing) j["wall_time_ms"] = report.wall_time_ms;
  return j;
}

RunReport report_from_json(const nlohmann::json& j) {
  RunReport report;
  report.command = j.at("command").get<std::string>();
  report.config = j.at("config");
  report.results = j.at("results");
  report.library_version = j.at("library_version").get<std::string>();
  if (j.contains("wall_time_ms")) report.wall_time_ms = j.at("wall_time_ms").get<double>();
  return report;
}

nlohmann::json test_result_json(const kge::TestResult& result) {
  nlohmann::json j;
  j["observed"] = json_number(result.observed);
  j["p_value"] = result.p_value;
  j["reject"] = result.reject;
  j["effective_truncation"] = result.effective_truncation;
  nlohmann::json values = nlohmann::json::array();
  for (double v : result.permutation_values) values.push_back(json_number(v));
  j["permutation_values"] = std::move(values);
  return j;
}

nlohmann::json curve_json(const kge::DivergenceCurve& curve) {
  nlohmann::json j;
  j["truncations"] = curve.truncations;
  nlohmann::json values = nlohmann::json::array();
  for (double v : curve.values) values.push_back(json_number(v));
  j["values"] = std::move(values);
  j["basis_size"] = curve.basis_size;
  j["truncated_to_rank"] = curve.truncated_to_rank;
  j["n"] = static_cast<long long>(curve.n);
  j["m"] = static_cast<long long>(curve.m);
  return j;
}

nlohmann::json spectrum_json(const Eigen::VectorXd& eigenvalues, double trace) {
  nlohmann::json j;
  nlohmann::json values = nlohmann::json::array();
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) values.push_back(eigenvalues(i));
  j["eigenvalues"] = std::move(values);
  j["count"] = static_cast<long long>(eigenvalues.size());
  j["trace"] = trace;
  return j;
}

std::string curve_tsv(const std::vector<int>& truncations, const std::vector<double>& values) {
  std::string out = "N\tvalue\n";
  for (std::size_t i = 0; i < truncations.size(); ++i) {
    out += std::to_string(truncations[i]);
    out += '\t';
    out += kge::format_shortest(values[i]);
    out += '\n';
  }
  return out;
}

std::string spectrum_tsv(const Eigen::VectorXd& eigenvalues) {
  std::string out = "component\teigenvalue\n";
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    out += std::to_string(i + 1);
    out += '\t';
    out += kge::format_shortest(eigenvalues(i));
    out += '\n';
  }
  return out;
}

std::string render(const RunReport& report) {
  return to_json(report, false).dump(2) + "\n";
}

}  // namespace kge_cli
