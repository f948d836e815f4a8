#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "kge/embeddings.hpp"
#include "kge/kernels.hpp"

// Reference computations for cross-checking the Gram-matrix code paths. Every
// routine here works in explicit coordinates or by direct formula, using
// different algorithms than the library (SelfAdjointEigenSolver instead of
// LAPACK, LU determinants instead of whitened eigensolves, full sorts instead
// of selection).
namespace oracle {

// One row per point: the explicit feature coordinates of a degree-1
// polynomial kernel.
Eigen::MatrixXd feature_matrix(const kge::KernelSpec& kernel, const kge::Sample& X);

Eigen::VectorXd feature_mean(const Eigen::MatrixXd& Phi);

// sum_i w_i phi_i phi_i^T; uniform weights by default.
Eigen::MatrixXd second_moment(const Eigen::MatrixXd& Phi);
Eigen::MatrixXd second_moment(const Eigen::MatrixXd& Phi, const Eigen::VectorXd& weights);

struct TruncatedSpectrum {
  Eigen::VectorXd eigenvalues;  // descending
  Eigen::MatrixXd vectors;      // matching columns
};

// Descending eigenpairs of a symmetric matrix with the library's retention
// rule: at most max_components, eigenvalue >= 1e-10 times the largest.
TruncatedSpectrum truncated_spectrum(const Eigen::MatrixXd& M, int max_components);

// D(N(mu_q, A) || N(mu_p, diag(lambda))) with mu = mu_q - mu_p, by the dense
// textbook formula with explicit inverses and an LU determinant. Returns
// +infinity when A is not positive definite.
double gaussian_kl(const Eigen::VectorXd& mu, const Eigen::MatrixXd& A,
                   const Eigen::VectorXd& lambda);

// Direct product form of det2, no log-space rearrangement.
double det2_direct(const Eigen::VectorXd& gammas);

// delta^T (M + eps I)^{-1} delta via a dense solve.
double ridge_quadratic(const Eigen::VectorXd& delta, const Eigen::MatrixXd& M, double eps);

// Median of all pairwise Euclidean distances by full sort; even counts
// average the two central order statistics.
double median_pairwise(const Eigen::MatrixXd& pooled);

// Deterministic uniform(-1,1) test fixture.
kge::Sample random_sample(int n, int d, std::uint64_t seed);

}  // namespace oracle
