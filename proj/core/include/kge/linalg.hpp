#pragma once

#include <Eigen/Dense>

namespace kge {

struct EigenDecomposition {
  Eigen::VectorXd eigenvalues;   // sorted descending
  Eigen::MatrixXd eigenvectors;  // column i pairs with eigenvalues(i)
};

// Full spectrum of a symmetric matrix, descending order. Input must be
// symmetric within 1e-10 absolute (InputError otherwise); solver
// non-convergence raises NumericalError. Deterministic for fixed input.
EigenDecomposition sym_eig(const Eigen::MatrixXd& M);

// Largest k eigenpairs only, descending. Same contract as sym_eig restricted
// to the top of the spectrum; values agree with full decomposition plus
// truncation to solver tolerance.
EigenDecomposition sym_eig_top(const Eigen::MatrixXd& M, int k);

// Solves M x = b for symmetric positive-definite M via Cholesky.
// NumericalError if the factorization detects an indefinite or singular input.
Eigen::VectorXd solve_spd(const Eigen::MatrixXd& M, const Eigen::VectorXd& b);

// Zeroes eigenvalues in [-threshold, 0) where threshold = rel_threshold * max
// eigenvalue; PSD inputs only acquire tiny negatives through roundoff.
void clamp_small_negatives(Eigen::VectorXd& eigenvalues, double rel_threshold = 1e-10);

}  // namespace kge
