#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kge/divergences.hpp"
#include "kge/embeddings.hpp"
#include "kge/kernels.hpp"

namespace kge {

enum class Statistic { Mmd, Hs, KlDiag, KlExact, Mahalanobis };

struct TestConfig {
  Statistic statistic = Statistic::KlExact;
  // Empty kernel selects RBF with the median-heuristic bandwidth, resolved
  // once on the pooled sample.
  std::optional<KernelSpec> kernel;
  int truncation = 20;    // KL statistics
  double epsilon = 1e-3;  // Mahalanobis ridge
  int permutations = 199;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool centred = false;  // KL statistics: drop the mean term
  bool mix = false;      // KL statistics: pooled-mixture covariance for Q
};

struct TestResult {
  double observed = 0.0;
  std::vector<double> permutation_values;
  double p_value = 1.0;
  bool reject = false;
  // Spectral components actually used on the observed split (0 for mmd/hs).
  int effective_truncation = 0;
  KernelSpec kernel;  // resolved kernel the statistic ran with
  std::optional<DivergenceCurve> diagnostics;
};

// Permutation-calibrated two-sample test. Pools the n+m points, evaluates the
// configured statistic on the observed labels and on cfg.permutations seeded
// relabelings (sizes preserved), and applies the add-one p-value rule with
// ties counted toward the numerator: p = (1 + #{T_b >= T_obs}) / (B + 1).
// Per-permutation generator seeds derive from (cfg.seed, permutation index),
// so results are bit-identical for any thread count.
TestResult permutation_test(const TestConfig& cfg, const Sample& X, const Sample& Y);

// Median of pairwise Euclidean distances over the pooled sample; the two
// central order statistics are averaged when the pair count is even. Exact up
// to 2000 pooled points; beyond that a fixed-seed uniform subsample of 2000
// points is used. All-zero distances raise DegenerateDataError.
double median_bandwidth(const Sample& X, const Sample& Y);

// Single-sample variant: pairwise distances within X alone.
double median_bandwidth(const Sample& X);

}  // namespace kge
