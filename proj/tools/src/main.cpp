#include <CLI11.hpp>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "kge/error.hpp"
#include "kge/parallel.hpp"
#include "kge/version.hpp"
#include "kge_cli/commands.hpp"

namespace {

void apply_thread_env() {
  const char* env = std::getenv("KGE_MAX_THREADS");
  if (env == nullptr) return;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end != env && *end == '\0' && v > 0) kge::set_max_threads(static_cast<int>(v));
}

std::optional<char> parse_delim(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "\\t" || text == "tab") return '\t';
  if (text.size() == 1) return text[0];
  throw kge_cli::UsageError("--delim expects a single character (or '\\t')");
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();

  CLI::App app{"Two-sample testing with kernel Gaussian embeddings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kge::library_version());

  kge_cli::TestOptions test_opt;
  std::string test_delim;
  CLI::App* test = app.add_subcommand("test", "Permutation-calibrated two-sample test");
  test->add_option("--x", test_opt.x_path, "First sample CSV")->required();
  test->add_option("--y", test_opt.y_path, "Second sample CSV")->required();
  test->add_option("--stat", test_opt.statistic, "mmd|hs|kl-diag|kl-exact|mahalanobis");
  test->add_option("--kernel", test_opt.kernel,
                   "Kernel grammar (rbf:sigma=S | rbf:median | laplace:scale=S | "
                   "poly:degree=D,offset=C,scale=A)");
  test->add_option("--n-trunc", test_opt.truncation, "Spectral truncation for KL statistics");
  test->add_option("--epsilon", test_opt.epsilon, "Ridge for the mahalanobis statistic");
  test->add_option("--b", test_opt.permutations, "Permutation count");
  test->add_option("--alpha", test_opt.alpha, "Significance level");
  test->add_option("--seed", test_opt.seed, "Seed for the permutation stream");
  test->add_flag("--centred", test_opt.centred, "Drop the mean term of KL statistics");
  test->add_flag("--mix", test_opt.mix, "Use the pooled-mixture covariance on the Y side");
  test->add_option("--delim", test_delim, "CSV delimiter override");
  test->add_option("--out", test_opt.out, "Write the JSON report here instead of stdout");

  kge_cli::CurveOptions curve_opt;
  std::string curve_delim;
  CLI::App* curve = app.add_subcommand("curve", "Divergence as a function of truncation level");
  curve->add_option("--x", curve_opt.x_path, "Reference sample CSV")->required();
  curve->add_option("--y", curve_opt.y_path, "Comparison sample CSV")->required();
  curve->add_option("--stat", curve_opt.statistic, "kl-exact|kl-diag");
  curve->add_option("--kernel", curve_opt.kernel, "Kernel grammar");
  curve->add_option("--trunc", curve_opt.truncations,
                    "Truncation levels: a:b inclusive range, comma list, or single level");
  curve->add_flag("--centred", curve_opt.centred, "Drop the mean term");
  curve->add_flag("--mix", curve_opt.mix, "Use the pooled-mixture covariance on the Y side");
  curve->add_option("--delim", curve_delim, "CSV delimiter override");
  curve->add_option("--out", curve_opt.out,
                    "Write the JSON report here (a .tsv table is written alongside)");

  kge_cli::SynthOptions synth_opt;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic sample as CSV");
  synth->add_option("--spec", synth_opt.spec,
                    "Distribution grammar, e.g. ucube:d=2,hw=1 or "
                    "shift:shift=0.5;0,base=(tgauss:d=2)")
      ->required();
  synth->add_option("--n", synth_opt.n, "Number of rows")->required();
  synth->add_option("--seed", synth_opt.seed, "Seed for the sampler stream");
  synth->add_option("--out", synth_opt.out, "Output CSV path")->required();

  kge_cli::SpectrumOptions spectrum_opt;
  std::string spectrum_delim;
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "Eigenvalues of the empirical covariance embedding");
  spectrum->alias("embed-spectrum");
  spectrum->add_option("--x", spectrum_opt.x_path, "Sample CSV")->required();
  spectrum->add_option("--kernel", spectrum_opt.kernel, "Kernel grammar");
  spectrum->add_option("--n-trunc", spectrum_opt.truncation, "Cap on retained components");
  spectrum->add_option("--delim", spectrum_delim, "CSV delimiter override");
  spectrum->add_option("--out", spectrum_opt.out,
                       "Write the JSON report here (a .tsv table is written alongside)");

  int rc = 0;
  test->callback([&] {
    test_opt.delimiter = parse_delim(test_delim);
    rc = kge_cli::cmd_test(test_opt);
  });
  curve->callback([&] {
    curve_opt.delimiter = parse_delim(curve_delim);
    rc = kge_cli::cmd_curve(curve_opt);
  });
  synth->callback([&] { rc = kge_cli::cmd_synth(synth_opt); });
  spectrum->callback([&] {
    spectrum_opt.delimiter = parse_delim(spectrum_delim);
    rc = kge_cli::cmd_spectrum(spectrum_opt);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const kge_cli::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const kge::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const kge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
