#include "kge_cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <utility>
#include <vector>

#include "kge/divergences.hpp"
#include "kge/format.hpp"
#include "kge/kernels.hpp"
#include "kge/spectral.hpp"
#include "kge/synth.hpp"
#include "kge/testing.hpp"
#include "kge/version.hpp"
#include "kge_cli/csv.hpp"
#include "kge_cli/report.hpp"

namespace kge_cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Configuration parsing happens before any data is touched; grammar and range
// failures there are usage errors, not data errors.
template <typename F>
auto config_phase(F&& f) {
  try {
    return f();
  } catch (const kge::InputError& e) {
    throw UsageError(e.what());
  }
}

kge::Statistic parse_statistic(const std::string& name) {
  if (name == "mmd") return kge::Statistic::Mmd;
  if (name == "hs") return kge::Statistic::Hs;
  if (name == "kl-diag") return kge::Statistic::KlDiag;
  if (name == "kl-exact") return kge::Statistic::KlExact;
  if (name == "mahalanobis") return kge::Statistic::Mahalanobis;
  throw UsageError("unknown statistic '" + name +
                   "' (choose mmd, hs, kl-diag, kl-exact, mahalanobis)");
}

kge::KernelSpec resolve_kernel(const kge::ParsedKernel& parsed, const kge::Sample& X,
                               const kge::Sample& Y) {
  if (parsed.median_rbf) return kge::RbfKernel{kge::median_bandwidth(X, Y)};
  return *parsed.spec;
}

kge::KernelSpec resolve_kernel(const kge::ParsedKernel& parsed, const kge::Sample& X) {
  if (parsed.median_rbf) return kge::RbfKernel{kge::median_bandwidth(X)};
  return *parsed.spec;
}

}  // namespace

std::vector<int> parse_truncations(const std::string& text) {
  auto parse_int = [&](const std::string& tok) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("bad truncation list '" + text + "'");
    }
    if (used != tok.size() || value < 1)
      throw UsageError("bad truncation list '" + text + "': levels are positive integers");
    return value;
  };

  std::vector<int> levels;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    int lo = parse_int(text.substr(0, colon));
    int hi = parse_int(text.substr(colon + 1));
    if (hi < lo) throw UsageError("bad truncation range '" + text + "': end below start");
    for (int v = lo; v <= hi; ++v) levels.push_back(v);
    return levels;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::size_t end = comma == std::string::npos ? text.size() : comma;
    levels.push_back(parse_int(text.substr(pos, end - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw UsageError("bad truncation list '" + text + "': levels must ascend");
  return levels;
}

namespace {

std::string tsv_path_for(const std::string& json_path) {
  constexpr std::string_view kJson = ".json";
  if (json_path.size() > kJson.size() &&
      json_path.compare(json_path.size() - kJson.size(), kJson.size(), kJson) == 0)
    return json_path.substr(0, json_path.size() - kJson.size()) + ".tsv";
  return json_path + ".tsv";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw kge::Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw kge::Error("write to '" + path + "' failed");
}

// JSON report to --out or stdout; optional TSV sibling only when a file
// destination exists. Wall time goes to stderr in both cases.
void emit(const RunReport& report, const std::optional<std::string>& out,
          const std::optional<std::string>& tsv) {
  std::string text = render(report);
  if (out.has_value()) {
    write_text(*out, text);
    if (tsv.has_value()) write_text(tsv_path_for(*out), *tsv);
  } else {
    std::cout << text;
  }
  std::cerr << "wall_time_ms " << kge::format_shortest(report.wall_time_ms) << "\n";
}

}  // namespace

int cmd_test(const TestOptions& opt) {
  auto start = Clock::now();

  kge::TestConfig cfg;
  kge::ParsedKernel parsed;
  config_phase([&] {
    cfg.statistic = parse_statistic(opt.statistic);
    parsed = kge::parse_kernel(opt.kernel);
    if (opt.permutations < 1) throw UsageError("--permutations must be >= 1");
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw UsageError("--alpha must lie in (0,1)");
    if (opt.truncation < 1) throw UsageError("--trunc must be >= 1");
    if (!(opt.epsilon > 0.0) || !std::isfinite(opt.epsilon))
      throw UsageError("--epsilon must be positive and finite");
    return 0;
  });
  cfg.truncation = opt.truncation;
  cfg.epsilon = opt.epsilon;
  cfg.permutations = opt.permutations;
  cfg.alpha = opt.alpha;
  cfg.seed = opt.seed;
  cfg.centred = opt.centred;
  cfg.mix = opt.mix;

  kge::Sample X = read_matrix(opt.x_path, opt.delimiter);
  kge::Sample Y = read_matrix(opt.y_path, opt.delimiter);
  cfg.kernel = resolve_kernel(parsed, X, Y);

  kge::TestResult result = kge::permutation_test(cfg, X, Y);

  RunReport report;
  report.command = "test";
  report.config = {{"x", opt.x_path},
                   {"y", opt.y_path},
                   {"statistic", opt.statistic},
                   {"kernel", kge::format_kernel(result.kernel)},
                   {"kernel_arg", opt.kernel},
                   {"truncation", cfg.truncation},
                   {"epsilon", cfg.epsilon},
                   {"permutations", cfg.permutations},
                   {"alpha", cfg.alpha},
                   {"seed", cfg.seed},
                   {"centred", cfg.centred},
                   {"mix", cfg.mix}};
  report.results = test_result_json(result);
  report.library_version = kge::library_version();
  report.wall_time_ms = elapsed_ms(start);
  emit(report, opt.out, std::nullopt);
  return 0;
}

int cmd_curve(const CurveOptions& opt) {
  auto start = Clock::now();

  kge::KLVariant variant;
  kge::ParsedKernel parsed;
  std::vector<int> truncations;
  config_phase([&] {
    if (opt.statistic == "kl-exact")
      variant.form = kge::KLVariant::Form::Exact;
    else if (opt.statistic == "kl-diag")
      variant.form = kge::KLVariant::Form::Diagonal;
    else
      throw UsageError("curve statistic must be kl-exact or kl-diag, got '" + opt.statistic +
                       "'");
    variant.centred = opt.centred;
    parsed = kge::parse_kernel(opt.kernel);
    truncations = parse_truncations(opt.truncations);
    return 0;
  });

  kge::Sample X = read_matrix(opt.x_path, opt.delimiter);
  kge::Sample Y = read_matrix(opt.y_path, opt.delimiter);
  kge::KernelSpec kernel = resolve_kernel(parsed, X, Y);

  kge::DivergenceCurve curve = kge::divergence_curve(kernel, X, Y, truncations, variant, opt.mix);

  RunReport report;
  report.command = "curve";
  report.config = {{"x", opt.x_path},
                   {"y", opt.y_path},
                   {"statistic", opt.statistic},
                   {"kernel", kge::format_kernel(kernel)},
                   {"kernel_arg", opt.kernel},
                   {"truncations", opt.truncations},
                   {"centred", opt.centred},
                   {"mix", opt.mix}};
  report.results = curve_json(curve);
  report.library_version = kge::library_version();
  report.wall_time_ms = elapsed_ms(start);
  emit(report, opt.out, curve_tsv(curve.truncations, curve.values));
  return 0;
}

int cmd_synth(const SynthOptions& opt) {
  kge::DistributionSpec spec = config_phase([&] {
    if (opt.n < 1) throw UsageError("--n must be >= 1");
    return kge::parse_distribution(opt.spec);
  });
  kge::Sample rows = kge::generate(spec, opt.n, opt.seed);
  write_matrix(opt.out, rows);
  return 0;
}

int cmd_spectrum(const SpectrumOptions& opt) {
  auto start = Clock::now();

  kge::ParsedKernel parsed;
  config_phase([&] {
    parsed = kge::parse_kernel(opt.kernel);
    if (opt.truncation.has_value() && *opt.truncation < 1)
      throw UsageError("--trunc must be >= 1");
    return 0;
  });

  kge::Sample X = read_matrix(opt.x_path, opt.delimiter);
  kge::KernelSpec kernel = resolve_kernel(parsed, X);

  kge::CovEmbedding S = kge::cov_embed(kernel, X);
  int cap = opt.truncation.value_or(static_cast<int>(X.rows()));
  kge::SpectralBasis basis = kge::cov_spectrum(S, cap);

  RunReport report;
  report.command = "spectrum";
  report.config = {{"x", opt.x_path},
                   {"kernel", kge::format_kernel(kernel)},
                   {"kernel_arg", opt.kernel},
                   {"truncation", opt.truncation.has_value() ? nlohmann::json(*opt.truncation)
                                                             : nlohmann::json(nullptr)}};
  report.results = spectrum_json(basis.eigenvalues, kge::trace(S));
  report.library_version = kge::library_version();
  report.wall_time_ms = elapsed_ms(start);
  emit(report, opt.out, spectrum_tsv(basis.eigenvalues));
  return 0;
}

}  // namespace kge_cli
