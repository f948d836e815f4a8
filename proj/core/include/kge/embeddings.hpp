#pragma once

#include <Eigen/Dense>
#include <optional>

#include "kge/kernels.hpp"

namespace kge {

// One observation per row.
using Sample = Eigen::MatrixXd;

// Throws InputError unless X has at least one row and only finite entries.
void validate_sample(const Sample& X, const char* who);

// Weighted combination of feature vectors: sum_i w_i k(x_i, .).
struct MeanEmbedding {
  KernelSpec kernel;
  Sample support;
  Eigen::VectorXd weights;
};

// Weighted second-moment operator: sum_i w_i k(x_i, .) (x) k(x_i, .).
struct CovEmbedding {
  KernelSpec kernel;
  Sample support;
  Eigen::VectorXd weights;
};

// Gaussian measure on the RKHS; a missing mean denotes the centred case.
struct GaussianEmbedding {
  std::optional<MeanEmbedding> mean;
  CovEmbedding cov;
  bool centred() const { return !mean.has_value(); }
};

MeanEmbedding mean_embed(const KernelSpec& kernel, const Sample& X);
MeanEmbedding mean_embed(const KernelSpec& kernel, const Sample& X,
                         const Eigen::VectorXd& weights);

CovEmbedding cov_embed(const KernelSpec& kernel, const Sample& X);
CovEmbedding cov_embed(const KernelSpec& kernel, const Sample& X,
                       const Eigen::VectorXd& weights);

GaussianEmbedding make_gaussian_embedding(std::optional<MeanEmbedding> mean, CovEmbedding cov);

// m(x) = sum_i w_i k(x_i, x), the reproducing-property evaluation.
double evaluate_mean(const MeanEmbedding& m, const Eigen::Ref<const Eigen::RowVectorXd>& x);

// <m1, m2> = sum_ij w1_i w2_j k(x_i, y_j).
double mean_inner(const MeanEmbedding& m1, const MeanEmbedding& m2);

// <f, S f> = sum_i w_i f(x_i)^2 with f given as a mean-embedding-shaped element.
double cov_quadratic_form(const CovEmbedding& S, const MeanEmbedding& f);

// sum_i w_i k(x_i, x_i); equals 1 for any RBF embedding with uniform weights.
double trace(const CovEmbedding& S);

}  // namespace kge
