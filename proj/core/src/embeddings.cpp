#include "kge/embeddings.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "kge/error.hpp"

namespace kge {

namespace {

void validate_weights(const Eigen::VectorXd& weights, Eigen::Index n, const char* who) {
  if (weights.size() != n)
    throw InputError(std::string(who) + ": weight count does not match support size");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights(i)) || weights(i) < 0.0)
      throw InputError(std::string(who) + ": weights must be finite and nonnegative");
    sum += weights(i);
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw InputError(std::string(who) + ": weights must sum to 1 (got " +
                     std::to_string(sum) + ")");
}

void require_same_kernel(const KernelSpec& a, const KernelSpec& b, const char* who) {
  if (!(a == b)) throw InputError(std::string(who) + ": kernel mismatch");
}

Eigen::VectorXd uniform_weights(Eigen::Index n) {
  return Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
}

}  // namespace

void validate_sample(const Sample& X, const char* who) {
  if (X.rows() < 1) throw InputError(std::string(who) + ": empty sample");
  if (X.cols() < 1) throw InputError(std::string(who) + ": sample must have dimension >= 1");
  if (!X.allFinite()) throw InputError(std::string(who) + ": sample contains non-finite entries");
}

MeanEmbedding mean_embed(const KernelSpec& kernel, const Sample& X) {
  return mean_embed(kernel, X, uniform_weights(X.rows()));
}

MeanEmbedding mean_embed(const KernelSpec& kernel, const Sample& X,
                         const Eigen::VectorXd& weights) {
  validate(kernel);
  validate_sample(X, "mean_embed");
  validate_weights(weights, X.rows(), "mean_embed");
  return MeanEmbedding{kernel, X, weights};
}

CovEmbedding cov_embed(const KernelSpec& kernel, const Sample& X) {
  return cov_embed(kernel, X, uniform_weights(X.rows()));
}

CovEmbedding cov_embed(const KernelSpec& kernel, const Sample& X,
                       const Eigen::VectorXd& weights) {
  validate(kernel);
  validate_sample(X, "cov_embed");
  validate_weights(weights, X.rows(), "cov_embed");
  return CovEmbedding{kernel, X, weights};
}

GaussianEmbedding make_gaussian_embedding(std::optional<MeanEmbedding> mean, CovEmbedding cov) {
  if (mean.has_value())
    require_same_kernel(mean->kernel, cov.kernel, "make_gaussian_embedding");
  return GaussianEmbedding{std::move(mean), std::move(cov)};
}

double evaluate_mean(const MeanEmbedding& m, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  if (x.size() != m.support.cols())
    throw InputError("evaluate_mean: point dimension does not match support");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.support.rows(); ++i)
    acc += m.weights(i) * eval(m.kernel, m.support.row(i), x);
  return acc;
}

double mean_inner(const MeanEmbedding& m1, const MeanEmbedding& m2) {
  require_same_kernel(m1.kernel, m2.kernel, "mean_inner");
  if (m1.support.cols() != m2.support.cols())
    throw InputError("mean_inner: supports have mismatched dimensions");
  GramMatrix K = gram(m1.kernel, m1.support, m2.support);
  return m1.weights.dot(K.values * m2.weights);
}

double cov_quadratic_form(const CovEmbedding& S, const MeanEmbedding& f) {
  require_same_kernel(S.kernel, f.kernel, "cov_quadratic_form");
  if (S.support.cols() != f.support.cols())
    throw InputError("cov_quadratic_form: supports have mismatched dimensions");
  // f evaluated at the support of S: K(z, x_i) weighted by f's coefficients.
  GramMatrix K = gram(S.kernel, f.support, S.support);
  Eigen::VectorXd fx = K.values.transpose() * f.weights;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < S.support.rows(); ++i) acc += S.weights(i) * fx(i) * fx(i);
  return acc;
}

double trace(const CovEmbedding& S) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < S.support.rows(); ++i)
    acc += S.weights(i) * eval(S.kernel, S.support.row(i), S.support.row(i));
  return acc;
}

}  // namespace kge
