#pragma once

#include <Eigen/Dense>
#include <optional>

#include "kge/embeddings.hpp"
#include "kge/kernels.hpp"

namespace kge {

// Leading eigenpairs of an embedded covariance operator. Eigenfunction i is
// e_i = sum_j coefficients(j,i) k(x_j, .) over the support points, normalized
// so <e_i, e_j> = delta_ij in the RKHS.
struct SpectralBasis {
  KernelSpec kernel;
  Sample support;
  Eigen::VectorXd eigenvalues;   // descending, all positive
  Eigen::MatrixXd coefficients;  // n x N
  int size() const { return static_cast<int>(eigenvalues.size()); }
};

// Mean vector and covariance matrix of a Gaussian embedding pushed through the
// rank-N spectral projection.
struct ProjectedGaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Spectral decomposition of S via its weighted Gram matrix. Retains at most
// max_components eigenpairs with eigenvalue >= min_eigenvalue; the floor
// defaults to 1e-10 times the largest eigenvalue. Components below the floor
// would contribute spurious 1/lambda amplification downstream. Sign
// convention: the largest-magnitude coefficient of each eigenfunction is
// positive (first occurrence breaks ties). Throws DegenerateSpectrumError when
// nothing survives the floor.
SpectralBasis cov_spectrum(const CovEmbedding& S, int max_components,
                           std::optional<double> min_eigenvalue = std::nullopt);

// Entry (l,i) = e_i(y_l).
Eigen::MatrixXd eval_basis(const SpectralBasis& B, const Sample& Y);

// Component i = <m, e_i>.
Eigen::VectorXd project_mean(const SpectralBasis& B, const MeanEmbedding& m);

// Entry (i,j) = <S e_i, e_j>; exactly symmetric by construction.
Eigen::MatrixXd project_cov(const SpectralBasis& B, const CovEmbedding& S);

namespace detail {

// Gram-level entry points: identical math with the kernel evaluations already
// materialized, so callers holding a pooled Gram can reuse its blocks.
SpectralBasis cov_spectrum_from_gram(const KernelSpec& kernel, const Sample& support,
                                     const Eigen::VectorXd& weights, const Eigen::MatrixXd& K,
                                     int max_components, std::optional<double> min_eigenvalue);

// K_support_other has entry (j,l) = k(x_j, z_l); returns the basis evaluated
// at the z points, entry (l,i) = e_i(z_l).
Eigen::MatrixXd eval_basis_from_gram(const SpectralBasis& B,
                                     const Eigen::MatrixXd& K_support_other);

Eigen::MatrixXd project_cov_from_values(const Eigen::MatrixXd& basis_values,
                                        const Eigen::VectorXd& weights);

}  // namespace detail

}  // namespace kge
