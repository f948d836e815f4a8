#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <variant>

namespace kge {

struct RbfKernel {
  double bandwidth = 1.0;  // sigma in exp(-|x-y|^2 / (2 sigma^2))
  bool operator==(const RbfKernel&) const = default;
};

struct LaplaceKernel {
  double scale = 1.0;  // s in exp(-|x-y|_1 / s)
  bool operator==(const LaplaceKernel&) const = default;
};

struct PolynomialKernel {
  int degree = 1;      // d in (a <x,y> + c)^d
  double offset = 0.0;  // c >= 0
  double scale = 1.0;   // a > 0
  bool operator==(const PolynomialKernel&) const = default;
};

using KernelSpec = std::variant<RbfKernel, LaplaceKernel, PolynomialKernel>;

struct GramMatrix {
  Eigen::MatrixXd values;
  bool symmetric;
};

// Throws InputError unless all parameters satisfy the family constraints
// (strictly positive, except the polynomial offset which may be zero).
void validate(const KernelSpec& kernel);

double eval(const KernelSpec& kernel, const Eigen::Ref<const Eigen::RowVectorXd>& x,
            const Eigen::Ref<const Eigen::RowVectorXd>& y);

// Entry (i,j) = k(x_i, y_j). When X and Y are the same object the upper
// triangle is computed and mirrored, so the result is exactly symmetric.
GramMatrix gram(const KernelSpec& kernel, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

// The kernel k' with k'(x,y) = k(x,y)^2, closed within the shipped families.
KernelSpec squared(const KernelSpec& kernel);

// Finite-dimensional feature map phi with <phi(x), phi(y)> = k(x,y), available
// for the degree-1 polynomial kernel: (sqrt(a) x_1, ..., sqrt(a) x_d[, sqrt(c)]),
// the constant coordinate dropped when c = 0. Other kernels throw
// UnsupportedOracleError.
Eigen::VectorXd explicit_feature_map(const KernelSpec& kernel,
                                     const Eigen::Ref<const Eigen::RowVectorXd>& x);

// CLI kernel grammar: "rbf:sigma=1.0", "laplace:scale=1.0",
// "poly:degree=1,offset=0,scale=1". "rbf:median" defers the bandwidth to the
// median heuristic, signalled by median_rbf.
struct ParsedKernel {
  std::optional<KernelSpec> spec;  // empty iff median_rbf
  bool median_rbf = false;
};

ParsedKernel parse_kernel(const std::string& text);
std::string format_kernel(const KernelSpec& kernel);

}  // namespace kge
