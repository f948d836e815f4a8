#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "kge/divergences.hpp"
#include "kge/error.hpp"
#include "kge/parallel.hpp"
#include "kge/rng.hpp"
#include "kge/testing.hpp"
#include "oracle.hpp"

namespace {

struct ThreadGuard {
  int saved = kge::max_threads();
  ~ThreadGuard() { kge::set_max_threads(saved); }
};

kge::Sample shifted(const kge::Sample& X, double by) {
  kge::Sample Y = X;
  Y.col(0).array() += by;
  return Y;
}

// Reproduces the statistic the permutation loop evaluates for permutation b
// by materially re-splitting the pooled sample and calling the public API.
std::pair<kge::Sample, kge::Sample> permuted_split(const kge::Sample& X, const kge::Sample& Y,
                                                   std::uint64_t seed, int b) {
  Eigen::Index n = X.rows();
  Eigen::Index m = Y.rows();
  kge::Sample pooled(n + m, X.cols());
  pooled << X, Y;
  std::vector<int> order(static_cast<std::size_t>(n + m));
  std::iota(order.begin(), order.end(), 0);
  kge::Pcg32 rng(kge::derive_seed(seed, static_cast<std::uint64_t>(b)));
  kge::shuffle(order, rng);
  kge::Sample Xb(n, X.cols());
  kge::Sample Yb(m, X.cols());
  for (Eigen::Index i = 0; i < n; ++i) Xb.row(i) = pooled.row(order[static_cast<std::size_t>(i)]);
  for (Eigen::Index j = 0; j < m; ++j)
    Yb.row(j) = pooled.row(order[static_cast<std::size_t>(n + j)]);
  return {Xb, Yb};
}

double public_statistic(const kge::TestConfig& cfg, const kge::KernelSpec& kernel,
                        const kge::Sample& X, const kge::Sample& Y) {
  switch (cfg.statistic) {
    case kge::Statistic::Mmd:
      return kge::mmd_squared(kernel, X, Y);
    case kge::Statistic::Hs:
      return kge::hs_distance_squared(kernel, X, Y);
    case kge::Statistic::Mahalanobis:
      return kge::mahalanobis_regularized(kernel, X, Y, cfg.epsilon);
    default:
      break;
  }
  kge::KLVariant variant{cfg.statistic == kge::Statistic::KlDiag ? kge::KLVariant::Form::Diagonal
                                                                 : kge::KLVariant::Form::Exact,
                         cfg.centred};
  kge::DivergenceCurve curve =
      kge::divergence_curve(kernel, X, Y, {cfg.truncation}, variant, cfg.mix);
  return curve.values.empty() ? std::numeric_limits<double>::infinity() : curve.values.back();
}

}  // namespace

TEST_CASE("median_bandwidth closed forms") {
  kge::Sample X(2, 1);
  X << 0.0, 2.0;
  kge::Sample Y(1, 1);
  Y << 1.0;
  // Pooled {0, 2, 1}: distances {2, 1, 1}, median 1.
  CHECK(kge::median_bandwidth(X, Y) == 1.0);
  // Within X alone the only distance is 2.
  CHECK(kge::median_bandwidth(X) == 2.0);

  kge::Sample Z(2, 2);
  Z << 0.0, 0.0, 3.0, 4.0;
  CHECK(kge::median_bandwidth(Z) == 5.0);

  // Even pair count averages the central order statistics: pooled {0, 1, 3}
  // has distances {1, 3, 2} -> median 2; adding 7 gives {1,3,7,2,6,4} -> 3.5.
  kge::Sample A(2, 1);
  A << 0.0, 1.0;
  kge::Sample B(2, 1);
  B << 3.0, 7.0;
  CHECK(kge::median_bandwidth(A, B) == 3.5);
}

TEST_CASE("median_bandwidth matches a full-sort reference below the subsample cap") {
  kge::Sample X = oracle::random_sample(300, 3, 21);
  kge::Sample Y = oracle::random_sample(200, 3, 22);
  kge::Sample pooled(500, 3);
  pooled << X, Y;
  CHECK(kge::median_bandwidth(X, Y) == oracle::median_pairwise(pooled));
  CHECK(kge::median_bandwidth(pooled) == oracle::median_pairwise(pooled));
}

TEST_CASE("median_bandwidth subsamples deterministically on large inputs") {
  kge::Sample X = oracle::random_sample(1500, 2, 31);
  kge::Sample Y = oracle::random_sample(1500, 2, 32);
  double first = kge::median_bandwidth(X, Y);
  double second = kge::median_bandwidth(X, Y);
  CHECK(first == second);
  CHECK(first > 0.0);
  // Ballpark sanity: nearby the exact median of a uniform square sample.
  kge::Sample pooled(3000, 2);
  pooled << X, Y;
  double exact = oracle::median_pairwise(pooled.topRows(1000));
  CHECK(first == doctest::Approx(exact).epsilon(0.15));
}

TEST_CASE("median_bandwidth rejects degenerate data") {
  kge::Sample X = kge::Sample::Zero(4, 2);
  CHECK_THROWS_AS(kge::median_bandwidth(X), kge::DegenerateDataError);
  CHECK_THROWS_AS(kge::median_bandwidth(X, X), kge::DegenerateDataError);
  CHECK_THROWS_AS(kge::median_bandwidth(kge::Sample::Zero(1, 2)), kge::InputError);
}

TEST_CASE("permutation_test on identical samples never rejects") {
  kge::Sample X = oracle::random_sample(30, 2, 41);
  kge::TestConfig cfg;
  cfg.statistic = kge::Statistic::Mmd;
  cfg.permutations = 99;
  kge::TestResult r = kge::permutation_test(cfg, X, X);
  CHECK(r.observed == 0.0);
  CHECK(r.p_value == 1.0);
  CHECK_FALSE(r.reject);
  CHECK(r.permutation_values.size() == 99);
}

TEST_CASE("permutation_test p-value follows the add-one rule") {
  kge::Sample X = oracle::random_sample(25, 2, 51);
  kge::Sample Y = shifted(oracle::random_sample(25, 2, 52), 0.3);
  kge::TestConfig cfg;
  cfg.statistic = kge::Statistic::Mmd;
  cfg.permutations = 39;
  cfg.seed = 7;
  kge::TestResult r = kge::permutation_test(cfg, X, Y);
  int ge = 0;
  for (double t : r.permutation_values)
    if (t >= r.observed) ++ge;
  CHECK(r.p_value == (1.0 + ge) / 40.0);
  CHECK(r.reject == (r.p_value <= cfg.alpha));

  cfg.permutations = 1;
  kge::TestResult tiny = kge::permutation_test(cfg, X, Y);
  CHECK((tiny.p_value == 0.5 || tiny.p_value == 1.0));
}

TEST_CASE("permutation_test is bit-identical across thread counts and repeats") {
  ThreadGuard guard;
  kge::Sample X = oracle::random_sample(40, 2, 61);
  kge::Sample Y = shifted(oracle::random_sample(35, 2, 62), 0.4);
  for (auto stat : {kge::Statistic::Mmd, kge::Statistic::KlExact, kge::Statistic::Mahalanobis}) {
    kge::TestConfig cfg;
    cfg.statistic = stat;
    cfg.truncation = 8;
    cfg.permutations = 25;
    cfg.seed = 99;

    kge::set_max_threads(1);
    kge::TestResult serial = kge::permutation_test(cfg, X, Y);
    kge::set_max_threads(4);
    kge::TestResult parallel = kge::permutation_test(cfg, X, Y);
    kge::TestResult again = kge::permutation_test(cfg, X, Y);

    CHECK(serial.observed == parallel.observed);
    CHECK(serial.p_value == parallel.p_value);
    REQUIRE(serial.permutation_values.size() == parallel.permutation_values.size());
    for (std::size_t i = 0; i < serial.permutation_values.size(); ++i) {
      CHECK(serial.permutation_values[i] == parallel.permutation_values[i]);
      CHECK(serial.permutation_values[i] == again.permutation_values[i]);
    }
  }
}

TEST_CASE("permutation loop reproduces the public statistics exactly") {
  kge::Sample X = oracle::random_sample(18, 2, 71);
  kge::Sample Y = shifted(oracle::random_sample(14, 2, 72), 0.5);
  const kge::KernelSpec kernel = kge::RbfKernel{0.9};

  for (auto stat : {kge::Statistic::Mmd, kge::Statistic::Hs, kge::Statistic::KlDiag,
                    kge::Statistic::KlExact, kge::Statistic::Mahalanobis}) {
    for (bool mix : {false, true}) {
      if (mix && stat != kge::Statistic::KlDiag && stat != kge::Statistic::KlExact) continue;
      kge::TestConfig cfg;
      cfg.statistic = stat;
      cfg.kernel = kernel;
      cfg.truncation = 5;
      cfg.epsilon = 0.05;
      cfg.permutations = 6;
      cfg.seed = 123;
      cfg.mix = mix;

      kge::TestResult r = kge::permutation_test(cfg, X, Y);
      CHECK(r.observed == public_statistic(cfg, kernel, X, Y));
      for (int b = 0; b < cfg.permutations; ++b) {
        auto [Xb, Yb] = permuted_split(X, Y, cfg.seed, b);
        CHECK(r.permutation_values[static_cast<std::size_t>(b)] ==
              public_statistic(cfg, kernel, Xb, Yb));
      }
    }
  }
}

TEST_CASE("centred KL statistic drops the mean term in the permutation loop") {
  kge::Sample X = oracle::random_sample(16, 2, 81);
  kge::Sample Y = shifted(oracle::random_sample(16, 2, 82), 0.6);
  kge::TestConfig cfg;
  cfg.statistic = kge::Statistic::KlExact;
  cfg.kernel = kge::RbfKernel{1.0};
  cfg.truncation = 4;
  cfg.permutations = 3;
  cfg.centred = true;
  kge::TestResult r = kge::permutation_test(cfg, X, Y);
  CHECK(r.observed == public_statistic(cfg, *cfg.kernel, X, Y));
  kge::TestConfig full = cfg;
  full.centred = false;
  CHECK(kge::permutation_test(full, X, Y).observed > r.observed);
}

TEST_CASE("permutation_test records the resolved kernel and truncation") {
  kge::Sample X = oracle::random_sample(20, 2, 91);
  kge::Sample Y = oracle::random_sample(20, 2, 92);
  kge::TestConfig cfg;
  cfg.statistic = kge::Statistic::KlExact;
  cfg.truncation = 50;
  cfg.permutations = 5;
  kge::TestResult r = kge::permutation_test(cfg, X, Y);

  const auto* rbf = std::get_if<kge::RbfKernel>(&r.kernel);
  REQUIRE(rbf != nullptr);
  CHECK(rbf->bandwidth == kge::median_bandwidth(X, Y));
  CHECK(r.effective_truncation > 0);
  CHECK(r.effective_truncation <= 20);

  cfg.statistic = kge::Statistic::Mmd;
  CHECK(kge::permutation_test(cfg, X, Y).effective_truncation == 0);
}

TEST_CASE("infinite statistics are calibrated rather than fatal") {
  // One-dimensional supports far apart under a tiny bandwidth make the
  // Q-projection singular on some splits; +inf must flow through the p-value.
  kge::Sample X(3, 1);
  X << 0.0, 1e-9, 2e-9;
  kge::Sample Y(3, 1);
  Y << 1.0, 1.0 + 1e-9, 1.0 + 2e-9;
  kge::TestConfig cfg;
  cfg.statistic = kge::Statistic::KlExact;
  cfg.kernel = kge::RbfKernel{1e-4};
  cfg.truncation = 3;
  cfg.permutations = 19;
  kge::TestResult r = kge::permutation_test(cfg, X, Y);
  CHECK(std::isinf(r.observed));
  CHECK(r.p_value > 0.0);
  CHECK(r.p_value <= 1.0);
  int ge = 0;
  for (double t : r.permutation_values)
    if (t >= r.observed) ++ge;
  CHECK(r.p_value == (1.0 + ge) / 20.0);
}

TEST_CASE("permutation_test validates its configuration") {
  kge::Sample X = oracle::random_sample(10, 2, 93);
  kge::Sample Y = oracle::random_sample(10, 2, 94);
  kge::TestConfig cfg;

  kge::TestConfig bad = cfg;
  bad.permutations = 0;
  CHECK_THROWS_AS(kge::permutation_test(bad, X, Y), kge::InputError);
  bad = cfg;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(kge::permutation_test(bad, X, Y), kge::InputError);
  bad = cfg;
  bad.alpha = 1.0;
  CHECK_THROWS_AS(kge::permutation_test(bad, X, Y), kge::InputError);
  bad = cfg;
  bad.truncation = 0;
  CHECK_THROWS_AS(kge::permutation_test(bad, X, Y), kge::InputError);
  bad = cfg;
  bad.statistic = kge::Statistic::Mahalanobis;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(kge::permutation_test(bad, X, Y), kge::InputError);

  kge::Sample Z = oracle::random_sample(10, 3, 95);
  CHECK_THROWS_AS(kge::permutation_test(cfg, X, Z), kge::InputError);
}

TEST_CASE("a mean shift is detected while the null is retained") {
  kge::Sample X = oracle::random_sample(80, 2, 96);
  kge::Sample Y = shifted(oracle::random_sample(80, 2, 97), 1.2);
  kge::TestConfig cfg;
  cfg.statistic = kge::Statistic::Mmd;
  cfg.permutations = 99;
  cfg.seed = 5;
  kge::TestResult alt = kge::permutation_test(cfg, X, Y);
  CHECK(alt.reject);
  CHECK(alt.p_value <= 0.05);

  kge::Sample Y0 = oracle::random_sample(80, 2, 98);
  kge::TestResult null_run = kge::permutation_test(cfg, X, Y0);
  CHECK(null_run.p_value > 0.05);
}
