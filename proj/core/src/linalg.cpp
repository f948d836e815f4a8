#include "kge/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>
#include <vector>

#include "kge/error.hpp"

namespace kge {

namespace {

void require_symmetric(const Eigen::MatrixXd& M, const char* who) {
  if (M.rows() != M.cols())
    throw InputError(std::string(who) + ": matrix must be square");
  if (M.rows() == 0) throw InputError(std::string(who) + ": matrix must be nonempty");
  double max_abs_diff = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (max_abs_diff > 1e-10)
    throw InputError(std::string(who) + ": matrix not symmetric (max asymmetry " +
                     std::to_string(max_abs_diff) + ")");
}

void check_lapack_info(lapack_int info, const char* routine) {
  if (info < 0)
    throw InputError(std::string(routine) + ": illegal argument " + std::to_string(-info));
  if (info > 0)
    throw NumericalError(std::string(routine) + ": failed to converge (info " +
                         std::to_string(info) + ")");
}

EigenDecomposition descending(Eigen::VectorXd values, Eigen::MatrixXd vectors) {
  EigenDecomposition out;
  out.eigenvalues = values.reverse();
  out.eigenvectors = vectors.rowwise().reverse();
  return out;
}

}  // namespace

EigenDecomposition sym_eig(const Eigen::MatrixXd& M) {
  require_symmetric(M, "sym_eig");
  auto n = static_cast<lapack_int>(M.rows());
  Eigen::MatrixXd work = M;
  Eigen::VectorXd values(n);
  lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, work.data(), n, values.data());
  check_lapack_info(info, "sym_eig");
  return descending(std::move(values), std::move(work));
}

EigenDecomposition sym_eig_top(const Eigen::MatrixXd& M, int k) {
  require_symmetric(M, "sym_eig_top");
  auto n = static_cast<lapack_int>(M.rows());
  if (k < 1 || k > n)
    throw InputError("sym_eig_top: k must be in [1, n]");
  Eigen::MatrixXd work = M;
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, k);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(k));
  lapack_int found = 0;
  lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, work.data(), n,
                                   0.0, 0.0, n - k + 1, n, 0.0, &found, values.data(),
                                   vectors.data(), n, isuppz.data());
  check_lapack_info(info, "sym_eig_top");
  if (found != k)
    throw NumericalError("sym_eig_top: solver returned " + std::to_string(found) +
                         " of " + std::to_string(k) + " requested eigenpairs");
  return descending(values.head(k), std::move(vectors));
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
  require_symmetric(M, "solve_spd");
  if (M.rows() != b.size())
    throw InputError("solve_spd: dimension mismatch between matrix and vector");
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success)
    throw NumericalError("solve_spd: matrix is not positive definite");
  return llt.solve(b);
}

void clamp_small_negatives(Eigen::VectorXd& eigenvalues, double rel_threshold) {
  if (eigenvalues.size() == 0) return;
  double max_val = eigenvalues.maxCoeff();
  if (max_val <= 0.0) return;
  double threshold = rel_threshold * max_val;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
    if (eigenvalues(i) < 0.0 && eigenvalues(i) >= -threshold) eigenvalues(i) = 0.0;
}

}  // namespace kge
