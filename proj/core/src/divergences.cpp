#include "kge/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kge/error.hpp"
#include "kge/linalg.hpp"

namespace kge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_pair(const KernelSpec& kernel, const Sample& X, const Sample& Y, const char* who) {
  validate(kernel);
  validate_sample(X, who);
  validate_sample(Y, who);
  if (X.cols() != Y.cols())
    throw InputError(std::string(who) + ": samples have mismatched dimensions");
}

double clamp_tiny_negative(double v) { return (v < 0.0 && v >= -1e-12) ? 0.0 : v; }

Eigen::VectorXd pooled_half_weights(Eigen::Index n, Eigen::Index m) {
  Eigen::VectorXd w(n + m);
  w.head(n).setConstant(0.5 / static_cast<double>(n));
  w.tail(m).setConstant(0.5 / static_cast<double>(m));
  return w;
}

}  // namespace

namespace detail {

double mmd_from_grams(const Eigen::MatrixXd& Kxx, const Eigen::MatrixXd& Kyy,
                      const Eigen::MatrixXd& Kxy) {
  auto n = static_cast<double>(Kxx.rows());
  auto m = static_cast<double>(Kyy.rows());
  double txx = Kxx.sum() / (n * n);
  double tyy = Kyy.sum() / (m * m);
  double txy = Kxy.sum() / (n * m);
  return clamp_tiny_negative(txx + tyy - 2.0 * txy);
}

double hs_from_grams(const Eigen::MatrixXd& Kxx, const Eigen::MatrixXd& Kyy,
                     const Eigen::MatrixXd& Kxy) {
  auto n = static_cast<double>(Kxx.rows());
  auto m = static_cast<double>(Kyy.rows());
  double txx = Kxx.array().square().sum() / (n * n);
  double tyy = Kyy.array().square().sum() / (m * m);
  double txy = Kxy.array().square().sum() / (n * m);
  return clamp_tiny_negative(txx + tyy - 2.0 * txy);
}

double kl_from_projection(const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
                          const Eigen::MatrixXd& A, int N, const KLVariant& variant) {
  if (N < 1) throw InputError("projected_kl: truncation must be >= 1");
  if (lambda.size() < N || A.rows() < N || A.cols() < N)
    throw InputError("projected_kl: truncation exceeds the projected pieces");
  if (!variant.centred && mu.size() < N)
    throw InputError("projected_kl: mean difference shorter than the truncation");

  double mean_term = 0.0;
  if (!variant.centred)
    for (int i = 0; i < N; ++i) mean_term += mu(i) * mu(i) / lambda(i);

  if (variant.form == KLVariant::Form::Diagonal) {
    double cov_term = 0.0;
    for (int i = 0; i < N; ++i) {
      double delta = A(i, i) / lambda(i) - 1.0;
      if (1.0 + delta <= 0.0) return kInf;
      cov_term += delta - std::log1p(delta);
    }
    return 0.5 * (mean_term + cov_term);
  }

  // Exact: whiten A by the reference eigenvalues, B = L^{-1/2} A L^{-1/2};
  // trace and log-determinant terms then read off B's diagonal and spectrum.
  Eigen::VectorXd inv_root(N);
  for (int i = 0; i < N; ++i) inv_root(i) = 1.0 / std::sqrt(lambda(i));
  Eigen::MatrixXd B(N, N);
  for (int j = 0; j < N; ++j)
    for (int i = j; i < N; ++i) {
      double v = A(i, j) * (inv_root(i) * inv_root(j));
      B(i, j) = v;
      B(j, i) = v;
    }

  double trace_term = 0.0;
  for (int i = 0; i < N; ++i) trace_term += B(i, i) - 1.0;

  EigenDecomposition eig = sym_eig(B);
  double logdet = 0.0;
  for (int i = 0; i < N; ++i) {
    if (eig.eigenvalues(i) <= 0.0) return kInf;
    logdet += std::log(eig.eigenvalues(i));
  }
  return 0.5 * (trace_term + mean_term - logdet);
}

}  // namespace detail

double mmd_squared(const KernelSpec& kernel, const Sample& X, const Sample& Y) {
  require_pair(kernel, X, Y, "mmd_squared");
  GramMatrix Kxx = gram(kernel, X, X);
  GramMatrix Kyy = gram(kernel, Y, Y);
  GramMatrix Kxy = gram(kernel, X, Y);
  return detail::mmd_from_grams(Kxx.values, Kyy.values, Kxy.values);
}

double hs_distance_squared(const KernelSpec& kernel, const Sample& X, const Sample& Y) {
  require_pair(kernel, X, Y, "hs_distance_squared");
  GramMatrix Kxx = gram(kernel, X, X);
  GramMatrix Kyy = gram(kernel, Y, Y);
  GramMatrix Kxy = gram(kernel, X, Y);
  return detail::hs_from_grams(Kxx.values, Kyy.values, Kxy.values);
}

double det2(const Eigen::VectorXd& gammas) {
  double log_acc = 0.0;
  for (Eigen::Index i = 0; i < gammas.size(); ++i) {
    double g = gammas(i);
    if (g <= -1.0)
      throw DomainError("det2: spectrum value <= -1, projected covariance is singular");
    log_acc += std::log1p(g) - g;
  }
  return std::exp(log_acc);
}

double projected_kl(const SpectralBasis& basisP, const MeanEmbedding& mP,
                    const MeanEmbedding& mQ, const CovEmbedding& SQ, int N,
                    const KLVariant& variant) {
  if (N < 1) throw InputError("projected_kl: truncation must be >= 1");
  if (N > basisP.size()) throw InputError("projected_kl: truncation exceeds the basis size");
  if (!(basisP.kernel == mP.kernel) || !(basisP.kernel == mQ.kernel) ||
      !(basisP.kernel == SQ.kernel))
    throw InputError("projected_kl: kernel mismatch");

  SpectralBasis head;
  head.kernel = basisP.kernel;
  head.support = basisP.support;
  head.eigenvalues = basisP.eigenvalues.head(N);
  head.coefficients = basisP.coefficients.leftCols(N);

  Eigen::VectorXd mu;
  if (!variant.centred) mu = project_mean(head, mP) - project_mean(head, mQ);
  Eigen::MatrixXd A = project_cov(head, SQ);
  return detail::kl_from_projection(head.eigenvalues, mu, A, N, variant);
}

DivergenceCurve divergence_curve(const KernelSpec& kernel, const Sample& X, const Sample& Y,
                                 const std::vector<int>& truncations, const KLVariant& variant,
                                 bool mix_covariance) {
  require_pair(kernel, X, Y, "divergence_curve");
  if (truncations.empty()) throw InputError("divergence_curve: empty truncation list");
  for (std::size_t i = 0; i < truncations.size(); ++i) {
    if (truncations[i] < 1)
      throw InputError("divergence_curve: truncations must be positive");
    if (i > 0 && truncations[i] <= truncations[i - 1])
      throw InputError("divergence_curve: truncations must be strictly ascending");
  }

  SpectralBasis basis = cov_spectrum(cov_embed(kernel, X), truncations.back());

  DivergenceCurve curve;
  curve.kernel = kernel;
  curve.variant = variant;
  curve.n = X.rows();
  curve.m = Y.rows();
  curve.basis_size = basis.size();
  for (int t : truncations) {
    if (t <= basis.size()) curve.truncations.push_back(t);
  }
  curve.truncated_to_rank = curve.truncations.size() < truncations.size();

  MeanEmbedding mP = mean_embed(kernel, X);
  MeanEmbedding mQ = mean_embed(kernel, Y);
  CovEmbedding SQ = [&] {
    if (!mix_covariance) return cov_embed(kernel, Y);
    Sample pooled(X.rows() + Y.rows(), X.cols());
    pooled << X, Y;
    return cov_embed(kernel, pooled, pooled_half_weights(X.rows(), Y.rows()));
  }();

  Eigen::VectorXd mu;
  if (!variant.centred) mu = project_mean(basis, mP) - project_mean(basis, mQ);
  Eigen::MatrixXd A = project_cov(basis, SQ);

  curve.values.reserve(curve.truncations.size());
  for (int t : curve.truncations)
    curve.values.push_back(detail::kl_from_projection(basis.eigenvalues, mu, A, t, variant));
  return curve;
}

double mahalanobis_regularized(const KernelSpec& kernel, const Sample& X, const Sample& Y,
                               double epsilon) {
  require_pair(kernel, X, Y, "mahalanobis_regularized");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw InputError("mahalanobis_regularized: epsilon must be positive and finite");

  double delta_sq = mmd_squared(kernel, X, Y);

  Sample pooled(X.rows() + Y.rows(), X.cols());
  pooled << X, Y;
  CovEmbedding pooled_cov =
      cov_embed(kernel, pooled, pooled_half_weights(X.rows(), Y.rows()));
  SpectralBasis basis = cov_spectrum(pooled_cov, static_cast<int>(pooled.rows()));

  Eigen::VectorXd c =
      project_mean(basis, mean_embed(kernel, X)) - project_mean(basis, mean_embed(kernel, Y));

  double within = 0.0;
  for (int i = 0; i < basis.size(); ++i) within += c(i) * c(i) / (basis.eigenvalues(i) + epsilon);
  double residual_sq = std::max(0.0, delta_sq - c.squaredNorm());
  return within + residual_sq / epsilon;
}

}  // namespace kge
