#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <string>
#include <vector>

#include "kge/divergences.hpp"
#include "kge/testing.hpp"

namespace kge_cli {

// Machine-readable record of one CLI run. The wall time is carried by the
// struct but excluded from the canonical document (include_timing = false) so
// repeated runs serialize to identical bytes; it is reported on stderr.
struct RunReport {
  std::string command;
  nlohmann::json config;
  nlohmann::json results;
  double wall_time_ms = 0.0;
  std::string library_version;

  bool operator==(const RunReport&) const = default;
};

// Finite doubles stay JSON numbers; +/-infinity becomes the strings
// "inf"/"-inf" since JSON has no infinity literal.
nlohmann::json json_number(double v);
double number_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunReport& report, bool include_timing);
RunReport report_from_json(const nlohmann::json& j);

nlohmann::json test_result_json(const kge::TestResult& result);
nlohmann::json curve_json(const kge::DivergenceCurve& curve);
nlohmann::json spectrum_json(const Eigen::VectorXd& eigenvalues, double trace);

// Plot-ready tables: a header row, then one row per entry, numbers in
// shortest round-trip form.
std::string curve_tsv(const std::vector<int>& truncations, const std::vector<double>& values);
std::string spectrum_tsv(const Eigen::VectorXd& eigenvalues);

// Canonical serialization: two-space indent, sorted keys, trailing newline.
std::string render(const RunReport& report);

}  // namespace kge_cli
