#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "kge/embeddings.hpp"

namespace kge {

struct UniformCube;
struct TruncatedGaussian;
struct GaussianMixture;
struct MeanShift;
struct ScaleChange;

using DistributionSpec =
    std::variant<UniformCube, TruncatedGaussian, GaussianMixture, MeanShift, ScaleChange>;

// Uniform on [-half_width, half_width]^dim.
struct UniformCube {
  int dim = 1;
  double half_width = 1.0;
};

// Gaussian with independent per-coordinate scales, conditioned on the
// standardized radius: accepted draws satisfy |(x - mean) / scale|_2 <= radius.
struct TruncatedGaussian {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
  double radius = 3.0;
};

// Mixture of Gaussians sharing one scale vector, each component truncated at
// three scale units so the support stays compact.
struct GaussianMixture {
  std::vector<Eigen::VectorXd> means;
  Eigen::VectorXd scale;
  std::vector<double> weights;
};

// Base distribution translated by a fixed vector.
struct MeanShift {
  std::shared_ptr<const DistributionSpec> base;
  Eigen::VectorXd shift;
};

// Base distribution scaled by a positive factor about the origin.
struct ScaleChange {
  std::shared_ptr<const DistributionSpec> base;
  double factor = 1.0;
};

// Throws InputError unless parameters are valid (positive scales and radii,
// mixture weights summing to 1, consistent dimensions).
void validate_spec(const DistributionSpec& spec);

int dimension(const DistributionSpec& spec);

// n i.i.d. draws, one per row, bit-identical for identical (spec, n, seed) on
// any platform. Rejection sampling that falls below an acceptance estimate of
// 1e-6 raises PathologicalSpecError.
Sample generate(const DistributionSpec& spec, int n, std::uint64_t seed);

// Distribution grammar for the CLI, e.g. "ucube:d=2,hw=1",
// "tgauss:d=2,mean=0.5;0,scale=1,radius=3",
// "gmix:d=1,means=-1|1,scale=0.3,weights=0.5;0.5",
// "shift:shift=1;0,base=(ucube:d=2,hw=1)", "scale:factor=2,base=(...)".
// Vectors are semicolon-separated; scalars broadcast where a vector is
// expected.
DistributionSpec parse_distribution(const std::string& text);

}  // namespace kge
