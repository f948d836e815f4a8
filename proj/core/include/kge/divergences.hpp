#pragma once

#include <Eigen/Dense>
#include <vector>

#include "kge/embeddings.hpp"
#include "kge/kernels.hpp"
#include "kge/spectral.hpp"

namespace kge {

struct KLVariant {
  enum class Form { Diagonal, Exact };
  Form form = Form::Exact;
  bool centred = false;  // drop the mean term
  bool operator==(const KLVariant&) const = default;
};

// Projected KL evaluated along a list of truncation levels, with the basis
// built once from the reference sample.
struct DivergenceCurve {
  std::vector<int> truncations;
  std::vector<double> values;
  KernelSpec kernel;
  KLVariant variant;
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  int basis_size = 0;
  // Set when requested truncations beyond the numerical rank were dropped.
  bool truncated_to_rank = false;
};

// Squared RKHS distance between the two empirical mean embeddings:
// (1/n^2) sum k(x,x') + (1/m^2) sum k(y,y') - (2/nm) sum k(x,y).
// Roundoff negatives within -1e-12 are clamped to zero.
double mmd_squared(const KernelSpec& kernel, const Sample& X, const Sample& Y);

// Squared Hilbert-Schmidt distance between the two second-moment embeddings;
// the same expansion with every kernel value squared, so it equals
// mmd_squared(squared(kernel), X, Y).
double hs_distance_squared(const KernelSpec& kernel, const Sample& X, const Sample& Y);

// Carleman-Fredholm determinant det2(I + H) = prod (1+g_j) exp(-g_j) over the
// spectrum of H, computed in log space. Any g_j <= -1 raises DomainError.
double det2(const Eigen::VectorXd& gammas);

// KL divergence between the two Gaussian embeddings pushed through the rank-N
// projection onto basisP: D(N(mu_Q, A) || N(mu_P, Lambda)) in the eigenbasis
// coordinates. Diagonal keeps only diag(A); Exact uses the full projected
// covariance. Returns +infinity when the projected Q covariance is singular
// along the retained components.
double projected_kl(const SpectralBasis& basisP, const MeanEmbedding& mP,
                    const MeanEmbedding& mQ, const CovEmbedding& SQ, int N,
                    const KLVariant& variant);

// Evaluates projected_kl at each truncation (ascending). Entries beyond the
// numerical rank of X's Gram are dropped and flagged. mix_covariance replaces
// Q's covariance by the pooled-mixture covariance (equal mass on both
// samples), which keeps the statistic finite under mutual singularity.
DivergenceCurve divergence_curve(const KernelSpec& kernel, const Sample& X, const Sample& Y,
                                 const std::vector<int>& truncations, const KLVariant& variant,
                                 bool mix_covariance = false);

// Ridge-regularized Mahalanobis distance of the mean-embedding difference
// delta under the pooled average covariance: sum c_i^2 / (gamma_i + epsilon)
// + r^2 / epsilon, where c are delta's coordinates in the pooled eigenbasis
// and r^2 = |delta|^2 - sum c_i^2 is the mass outside the retained span.
double mahalanobis_regularized(const KernelSpec& kernel, const Sample& X, const Sample& Y,
                               double epsilon);

namespace detail {

// Three-block MMD expansion on materialized Gram blocks.
double mmd_from_grams(const Eigen::MatrixXd& Kxx, const Eigen::MatrixXd& Kyy,
                      const Eigen::MatrixXd& Kxy);

// Same expansion with entries squared at use.
double hs_from_grams(const Eigen::MatrixXd& Kxx, const Eigen::MatrixXd& Kyy,
                     const Eigen::MatrixXd& Kxy);

// KL from projected pieces: eigenvalues lambda (>= N entries), mean difference
// mu (ignored when variant.centred; must have >= N entries otherwise), and
// projected covariance A (at least N x N leading block).
double kl_from_projection(const Eigen::VectorXd& lambda, const Eigen::VectorXd& mu,
                          const Eigen::MatrixXd& A, int N, const KLVariant& variant);

}  // namespace detail

}  // namespace kge
