#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kge/error.hpp"

namespace kge_cli {

// Command-line contract violations that CLI11 cannot catch itself (bad value
// grammar, incompatible flag combinations). Mapped to exit code 1.
struct UsageError : kge::Error {
  using Error::Error;
};

struct TestOptions {
  std::string x_path;
  std::string y_path;
  std::string statistic = "kl-exact";
  std::string kernel = "rbf:median";
  int truncation = 20;
  double epsilon = 1e-3;
  int permutations = 199;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool centred = false;
  bool mix = false;
  std::optional<std::string> out;
  std::optional<char> delimiter;
};

struct CurveOptions {
  std::string x_path;
  std::string y_path;
  std::string statistic = "kl-exact";
  std::string kernel = "rbf:median";
  std::string truncations = "1:20";
  bool centred = false;
  bool mix = false;
  std::optional<std::string> out;
  std::optional<char> delimiter;
};

struct SynthOptions {
  std::string spec;
  int n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct SpectrumOptions {
  std::string x_path;
  std::string kernel = "rbf:median";
  std::optional<int> truncation;
  std::optional<std::string> out;
  std::optional<char> delimiter;
};

// Truncation-list grammar for --trunc: "a:b" expands to the inclusive range,
// "3,7,12" lists ascending levels explicitly, a bare integer gives one level.
std::vector<int> parse_truncations(const std::string& text);

// Each command reads its inputs, runs the requested computation, and writes a
// JSON report to stdout or --out. Wall time goes to stderr so repeated runs
// produce byte-identical primary output.
int cmd_test(const TestOptions& opt);
int cmd_curve(const CurveOptions& opt);
int cmd_synth(const SynthOptions& opt);
int cmd_spectrum(const SpectrumOptions& opt);

}  // namespace kge_cli
