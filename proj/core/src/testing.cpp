#include "kge/testing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kge/error.hpp"
#include "kge/parallel.hpp"
#include "kge/rng.hpp"
#include "kge/spectral.hpp"

namespace kge {

namespace {

constexpr std::uint64_t kMedianSubsampleSeed = 0x6d656469616eULL;

bool uses_truncation(Statistic s) { return s == Statistic::KlDiag || s == Statistic::KlExact; }

// Evaluates the configured statistic on an index split of the pooled sample,
// sourcing every kernel value from the precomputed pooled Gram. Blocks are
// extracted per split; the arithmetic mirrors the public statistic functions
// step for step so results match them bitwise.
class SplitEvaluator {
 public:
  SplitEvaluator(const TestConfig& cfg, const KernelSpec& kernel, const Sample& pooled,
                 Eigen::Index n, Eigen::Index m)
      : cfg_(cfg), kernel_(kernel), pooled_(pooled), n_(n), m_(m) {
    K_ = gram(kernel, pooled_, pooled_).values;
  }

  struct Value {
    double statistic;
    int components;
  };

  Value evaluate(const std::vector<int>& order) const {
    switch (cfg_.statistic) {
      case Statistic::Mmd: {
        auto [Kxx, Kyy, Kxy] = split_blocks(order);
        return {detail::mmd_from_grams(Kxx, Kyy, Kxy), 0};
      }
      case Statistic::Hs: {
        auto [Kxx, Kyy, Kxy] = split_blocks(order);
        return {detail::hs_from_grams(Kxx, Kyy, Kxy), 0};
      }
      case Statistic::KlDiag:
      case Statistic::KlExact:
        return evaluate_kl(order);
      case Statistic::Mahalanobis:
        return evaluate_mahalanobis(order);
    }
    throw InputError("permutation_test: unknown statistic");
  }

 private:
  std::tuple<Eigen::MatrixXd, Eigen::MatrixXd, Eigen::MatrixXd> split_blocks(
      const std::vector<int>& order) const {
    Eigen::MatrixXd Kxx(n_, n_), Kyy(m_, m_), Kxy(n_, m_);
    for (Eigen::Index j = 0; j < n_; ++j)
      for (Eigen::Index i = 0; i < n_; ++i) Kxx(i, j) = K_(order[i], order[j]);
    for (Eigen::Index j = 0; j < m_; ++j)
      for (Eigen::Index i = 0; i < m_; ++i) Kyy(i, j) = K_(order[n_ + i], order[n_ + j]);
    for (Eigen::Index j = 0; j < m_; ++j)
      for (Eigen::Index i = 0; i < n_; ++i) Kxy(i, j) = K_(order[i], order[n_ + j]);
    return {std::move(Kxx), std::move(Kyy), std::move(Kxy)};
  }

  Sample rows_of(const std::vector<int>& order, Eigen::Index offset, Eigen::Index count) const {
    Sample S(count, pooled_.cols());
    for (Eigen::Index i = 0; i < count; ++i) S.row(i) = pooled_.row(order[offset + i]);
    return S;
  }

  Value evaluate_kl(const std::vector<int>& order) const {
    auto [Kxx, Kyy, Kxy] = split_blocks(order);
    Sample Xs = rows_of(order, 0, n_);
    Eigen::VectorXd wx = Eigen::VectorXd::Constant(n_, 1.0 / static_cast<double>(n_));
    SpectralBasis basis = detail::cov_spectrum_from_gram(kernel_, Xs, wx, Kxx,
                                                         cfg_.truncation, std::nullopt);
    int N = basis.size();

    KLVariant variant{cfg_.statistic == Statistic::KlDiag ? KLVariant::Form::Diagonal
                                                          : KLVariant::Form::Exact,
                      cfg_.centred};

    Eigen::VectorXd mu;
    if (!variant.centred) {
      Eigen::VectorXd muP =
          detail::eval_basis_from_gram(basis, Kxx).transpose() * wx;
      Eigen::VectorXd wy = Eigen::VectorXd::Constant(m_, 1.0 / static_cast<double>(m_));
      Eigen::VectorXd muQ =
          detail::eval_basis_from_gram(basis, Kxy).transpose() * wy;
      mu = muP - muQ;
    }

    Eigen::MatrixXd A;
    if (cfg_.mix) {
      Eigen::MatrixXd Kxp(n_, n_ + m_);
      Kxp << Kxx, Kxy;
      Eigen::VectorXd wp(n_ + m_);
      wp.head(n_).setConstant(0.5 / static_cast<double>(n_));
      wp.tail(m_).setConstant(0.5 / static_cast<double>(m_));
      A = detail::project_cov_from_values(detail::eval_basis_from_gram(basis, Kxp), wp);
    } else {
      Eigen::VectorXd wy = Eigen::VectorXd::Constant(m_, 1.0 / static_cast<double>(m_));
      A = detail::project_cov_from_values(detail::eval_basis_from_gram(basis, Kxy), wy);
    }
    return {detail::kl_from_projection(basis.eigenvalues, mu, A, N, variant), N};
  }

  Value evaluate_mahalanobis(const std::vector<int>& order) const {
    auto [Kxx, Kyy, Kxy] = split_blocks(order);
    double delta_sq = detail::mmd_from_grams(Kxx, Kyy, Kxy);

    Eigen::Index total = n_ + m_;
    Eigen::MatrixXd Kpp(total, total);
    for (Eigen::Index j = 0; j < total; ++j)
      for (Eigen::Index i = 0; i < total; ++i) Kpp(i, j) = K_(order[i], order[j]);
    Eigen::VectorXd wp(total);
    wp.head(n_).setConstant(0.5 / static_cast<double>(n_));
    wp.tail(m_).setConstant(0.5 / static_cast<double>(m_));

    Sample Ps = rows_of(order, 0, total);
    SpectralBasis basis = detail::cov_spectrum_from_gram(kernel_, Ps, wp, Kpp,
                                                         static_cast<int>(total), std::nullopt);

    Eigen::VectorXd wx = Eigen::VectorXd::Constant(n_, 1.0 / static_cast<double>(n_));
    Eigen::VectorXd wy = Eigen::VectorXd::Constant(m_, 1.0 / static_cast<double>(m_));
    Eigen::MatrixXd Kpx = Kpp.leftCols(n_);
    Eigen::MatrixXd Kpy = Kpp.rightCols(m_);
    Eigen::VectorXd c = detail::eval_basis_from_gram(basis, Kpx).transpose() * wx -
                        detail::eval_basis_from_gram(basis, Kpy).transpose() * wy;

    double within = 0.0;
    for (int i = 0; i < basis.size(); ++i)
      within += c(i) * c(i) / (basis.eigenvalues(i) + cfg_.epsilon);
    double residual_sq = std::max(0.0, delta_sq - c.squaredNorm());
    return {within + residual_sq / cfg_.epsilon, basis.size()};
  }

  const TestConfig& cfg_;
  KernelSpec kernel_;
  const Sample& pooled_;
  Eigen::Index n_;
  Eigen::Index m_;
  Eigen::MatrixXd K_;
};

void validate_config(const TestConfig& cfg) {
  if (cfg.permutations < 1) throw InputError("permutation_test: permutations must be >= 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw InputError("permutation_test: alpha must lie in (0,1)");
  if (uses_truncation(cfg.statistic) && cfg.truncation < 1)
    throw InputError("permutation_test: truncation must be >= 1");
  if (cfg.statistic == Statistic::Mahalanobis &&
      (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)))
    throw InputError("permutation_test: epsilon must be positive and finite");
  if (cfg.kernel.has_value()) validate(*cfg.kernel);
}

}  // namespace

TestResult permutation_test(const TestConfig& cfg, const Sample& X, const Sample& Y) {
  validate_config(cfg);
  validate_sample(X, "permutation_test");
  validate_sample(Y, "permutation_test");
  if (X.cols() != Y.cols())
    throw InputError("permutation_test: samples have mismatched dimensions");
  if (X.rows() < 2 || Y.rows() < 2)
    throw InputError("permutation_test: need at least two points per sample");

  Eigen::Index n = X.rows();
  Eigen::Index m = Y.rows();
  Sample pooled(n + m, X.cols());
  pooled << X, Y;

  KernelSpec kernel = cfg.kernel.has_value() ? *cfg.kernel : RbfKernel{median_bandwidth(X, Y)};
  SplitEvaluator evaluator(cfg, kernel, pooled, n, m);

  std::vector<int> identity(static_cast<std::size_t>(n + m));
  std::iota(identity.begin(), identity.end(), 0);
  SplitEvaluator::Value observed = evaluator.evaluate(identity);

  TestResult result;
  result.observed = observed.statistic;
  result.effective_truncation = observed.components;
  result.kernel = kernel;
  result.permutation_values.resize(static_cast<std::size_t>(cfg.permutations));

  parallel_for(cfg.permutations, [&](std::int64_t b) {
    Pcg32 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(b)));
    std::vector<int> order(identity);
    shuffle(order, rng);
    result.permutation_values[static_cast<std::size_t>(b)] = evaluator.evaluate(order).statistic;
  });

  int exceed = 0;
  for (double v : result.permutation_values)
    if (v >= result.observed) ++exceed;
  result.p_value = static_cast<double>(1 + exceed) / static_cast<double>(cfg.permutations + 1);
  result.reject = result.p_value <= cfg.alpha;
  return result;
}

namespace {

double median_pairwise_distance(const Sample& pooled) {
  Eigen::Index total = pooled.rows();
  if (total < 2) throw InputError("median_bandwidth: pooled sample needs at least two points");

  constexpr Eigen::Index kExactCap = 2000;
  std::vector<int> chosen;
  if (total <= kExactCap) {
    chosen.resize(static_cast<std::size_t>(total));
    std::iota(chosen.begin(), chosen.end(), 0);
  } else {
    std::vector<int> indices(static_cast<std::size_t>(total));
    std::iota(indices.begin(), indices.end(), 0);
    Pcg32 rng(kMedianSubsampleSeed);
    for (Eigen::Index i = 0; i < kExactCap; ++i) {
      auto j = i + static_cast<Eigen::Index>(
                       rng.next_below(static_cast<std::uint32_t>(total - i)));
      std::swap(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
    }
    chosen.assign(indices.begin(), indices.begin() + kExactCap);
  }

  auto count = chosen.size();
  std::vector<double> dists;
  dists.reserve(count * (count - 1) / 2);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j)
      dists.push_back((pooled.row(chosen[i]) - pooled.row(chosen[j])).norm());

  std::size_t half = dists.size() / 2;
  std::nth_element(dists.begin(), dists.begin() + half, dists.end());
  double median = dists[half];
  if (dists.size() % 2 == 0) {
    double below = *std::max_element(dists.begin(), dists.begin() + half);
    median = 0.5 * (below + median);
  }
  if (median == 0.0)
    throw DegenerateDataError("median_bandwidth: median pairwise distance is zero");
  return median;
}

}  // namespace

double median_bandwidth(const Sample& X, const Sample& Y) {
  validate_sample(X, "median_bandwidth");
  validate_sample(Y, "median_bandwidth");
  if (X.cols() != Y.cols())
    throw InputError("median_bandwidth: samples have mismatched dimensions");

  Sample pooled(X.rows() + Y.rows(), X.cols());
  pooled << X, Y;
  return median_pairwise_distance(pooled);
}

double median_bandwidth(const Sample& X) {
  validate_sample(X, "median_bandwidth");
  return median_pairwise_distance(X);
}

}  // namespace kge
