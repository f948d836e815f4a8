#include "kge/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "kge/error.hpp"
#include "kge/linalg.hpp"

namespace kge {

namespace detail {

SpectralBasis cov_spectrum_from_gram(const KernelSpec& kernel, const Sample& support,
                                     const Eigen::VectorXd& weights, const Eigen::MatrixXd& K,
                                     int max_components, std::optional<double> min_eigenvalue) {
  auto n = support.rows();
  if (max_components < 1) throw InputError("cov_spectrum: max_components must be >= 1");
  if (min_eigenvalue.has_value() && !(*min_eigenvalue > 0.0))
    throw InputError("cov_spectrum: min_eigenvalue must be positive");

  // Weighted symmetrization: with D = diag(sqrt(w)), eigenpairs of S correspond
  // to eigenpairs of M = D K D; a unit eigenvector g maps to coefficients
  // alpha = D g / sqrt(lambda), which makes <e_i, e_j> = delta_ij. Entries are
  // scaled with a single product so M is exactly symmetric by construction.
  Eigen::VectorXd root_w = weights.cwiseSqrt();
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j; i < n; ++i) {
      double v = K(i, j) * (root_w(i) * root_w(j));
      M(i, j) = v;
      M(j, i) = v;
    }

  int k = std::min<int>(max_components, static_cast<int>(n));
  EigenDecomposition eig = sym_eig_top(M, k);
  clamp_small_negatives(eig.eigenvalues);

  double lambda_max = eig.eigenvalues(0);
  if (!(lambda_max > 0.0))
    throw DegenerateSpectrumError("cov_spectrum: spectrum is numerically zero");
  double floor = min_eigenvalue.value_or(1e-10 * lambda_max);

  int retained = 0;
  while (retained < k && eig.eigenvalues(retained) >= floor) ++retained;
  if (retained == 0)
    throw DegenerateSpectrumError("cov_spectrum: all eigenvalues below the retention floor");

  SpectralBasis basis;
  basis.kernel = kernel;
  basis.support = support;
  basis.eigenvalues = eig.eigenvalues.head(retained);
  basis.coefficients.resize(n, retained);
  for (int i = 0; i < retained; ++i) {
    double inv_root_lambda = 1.0 / std::sqrt(basis.eigenvalues(i));
    basis.coefficients.col(i) = root_w.cwiseProduct(eig.eigenvectors.col(i)) * inv_root_lambda;
    Eigen::Index argmax = 0;
    basis.coefficients.col(i).cwiseAbs().maxCoeff(&argmax);
    if (basis.coefficients(argmax, i) < 0.0) basis.coefficients.col(i) = -basis.coefficients.col(i);
  }
  return basis;
}

Eigen::MatrixXd eval_basis_from_gram(const SpectralBasis& B,
                                     const Eigen::MatrixXd& K_support_other) {
  return K_support_other.transpose() * B.coefficients;
}

Eigen::MatrixXd project_cov_from_values(const Eigen::MatrixXd& basis_values,
                                        const Eigen::VectorXd& weights) {
  Eigen::MatrixXd scaled = weights.cwiseSqrt().asDiagonal() * basis_values;
  Eigen::Index N = basis_values.cols();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  A.selfadjointView<Eigen::Lower>().rankUpdate(scaled.transpose());
  A.triangularView<Eigen::StrictlyUpper>() = A.transpose();
  return A;
}

}  // namespace detail

SpectralBasis cov_spectrum(const CovEmbedding& S, int max_components,
                           std::optional<double> min_eigenvalue) {
  GramMatrix K = gram(S.kernel, S.support, S.support);
  return detail::cov_spectrum_from_gram(S.kernel, S.support, S.weights, K.values,
                                        max_components, min_eigenvalue);
}

Eigen::MatrixXd eval_basis(const SpectralBasis& B, const Sample& Y) {
  validate_sample(Y, "eval_basis");
  if (Y.cols() != B.support.cols())
    throw InputError("eval_basis: points do not match the basis dimension");
  GramMatrix K = gram(B.kernel, B.support, Y);
  return detail::eval_basis_from_gram(B, K.values);
}

Eigen::VectorXd project_mean(const SpectralBasis& B, const MeanEmbedding& m) {
  if (!(B.kernel == m.kernel)) throw InputError("project_mean: kernel mismatch");
  Eigen::MatrixXd E = eval_basis(B, m.support);
  return E.transpose() * m.weights;
}

Eigen::MatrixXd project_cov(const SpectralBasis& B, const CovEmbedding& S) {
  if (!(B.kernel == S.kernel)) throw InputError("project_cov: kernel mismatch");
  Eigen::MatrixXd E = eval_basis(B, S.support);
  return detail::project_cov_from_values(E, S.weights);
}

}  // namespace kge
