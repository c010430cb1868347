#include "satdomain/eigen_solver.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/SparseCholesky>

#include "satdomain/rng.hpp"

namespace satdomain {

EigenPairs smallest_eigenpairs_dense(const Eigen::MatrixXd& a, int m) {
  if (m < 1 || m > a.rows()) throw std::invalid_argument("eigenpairs: need 1 <= m <= n");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  EigenPairs p;
  p.values = es.eigenvalues().head(m);
  p.vectors = es.eigenvectors().leftCols(m);
  p.max_residual = ((a * p.vectors) - p.vectors * p.values.asDiagonal()).colwise().norm().maxCoeff();
  return p;
}

double eigen_residual(const Eigen::SparseMatrix<double>& a, const EigenPairs& p) {
  if (p.values.size() == 0) return 0.0;
  return ((a * p.vectors) - p.vectors * p.values.asDiagonal()).colwise().norm().maxCoeff();
}

namespace {

// Orthogonalizes the columns of `v` against Q (first `used` columns) twice, then
// orthonormalizes them among themselves; columns that collapse are replaced by
// fresh random directions.
void orthonormalize_block(const Eigen::MatrixXd& q, Eigen::Index used, Eigen::MatrixXd& v, Rng& rng) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double before = v.col(j).norm();
      for (int pass = 0; pass < 2; ++pass) {
        if (used > 0) v.col(j) -= q.leftCols(used) * (q.leftCols(used).transpose() * v.col(j));
        if (j > 0) v.col(j) -= v.leftCols(j) * (v.leftCols(j).transpose() * v.col(j));
      }
      const double after = v.col(j).norm();
      if (after > 1e-10 * std::max(before, 1e-300)) {
        v.col(j) /= after;
        break;
      }
      for (Eigen::Index r = 0; r < v.rows(); ++r) v(r, j) = rng.uniform() - 0.5;
    }
  }
}

}  // namespace

EigenPairs smallest_eigenpairs_lanczos(const Eigen::SparseMatrix<double>& a, int m, const LanczosOptions& opt) {
  const Eigen::Index n = a.rows();
  if (m < 1 || m > n) throw std::invalid_argument("eigenpairs: need 1 <= m <= n");
  const Eigen::Index b = std::min<Eigen::Index>(n, m + opt.extra_block);
  const Eigen::Index kmax = std::min<Eigen::Index>(n, b * opt.max_blocks);

  Eigen::SparseMatrix<double> shifted = a;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) += opt.shift;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) return {};

  Rng rng(opt.seed);
  Eigen::MatrixXd start(n, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    for (Eigen::Index r = 0; r < n; ++r) start(r, j) = rng.uniform() - 0.5;
  }
  if (opt.initial.rows() == n) {
    const Eigen::Index w = std::min(b, opt.initial.cols());
    start.leftCols(w) = opt.initial.leftCols(w);
  }

  for (int cycle = 0; cycle < opt.max_cycles; ++cycle) {
    Eigen::MatrixXd q(n, kmax);
    Eigen::MatrixXd opq(n, kmax);
    Eigen::Index used = 0;
    Eigen::MatrixXd block = start;
    orthonormalize_block(q, 0, block, rng);
    while (used < kmax) {
      const Eigen::Index w = std::min(block.cols(), kmax - used);
      q.middleCols(used, w) = block.leftCols(w);
      Eigen::MatrixXd applied = ldlt.solve(block.leftCols(w));
      opq.middleCols(used, w) = applied;
      used += w;
      if (used >= kmax) break;
      block = applied;
      orthonormalize_block(q, used, block, rng);
    }
    // Rayleigh-Ritz on the inverse operator: its largest values are A's smallest.
    Eigen::MatrixXd t = q.leftCols(used).transpose() * opq.leftCols(used);
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::Index keep = std::min<Eigen::Index>(b, used);
    Eigen::MatrixXd y = q.leftCols(used) * es.eigenvectors().rightCols(keep).rowwise().reverse();

    // Second projection onto A itself for accurate values.
    Eigen::MatrixXd ay = a * y;
    Eigen::MatrixXd small = y.transpose() * ay;
    small = 0.5 * (small + small.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> fs(small);
    Eigen::MatrixXd u = y * fs.eigenvectors();
    EigenPairs p;
    p.values = fs.eigenvalues().head(m);
    p.vectors = u.leftCols(m);
    p.iterative = true;
    p.max_residual = eigen_residual(a, p);
    if (p.max_residual < opt.tolerance) return p;
    start = u;  // restart from the refined Ritz block
  }
  return {};
}

EigenPairs smallest_eigenpairs(const Eigen::SparseMatrix<double>& a, int m, std::size_t dense_limit,
                               const LanczosOptions& opt) {
  if (static_cast<std::size_t>(a.rows()) > dense_limit) {
    EigenPairs p = smallest_eigenpairs_lanczos(a, m, opt);
    if (p.values.size() == m) return p;
  }
  return smallest_eigenpairs_dense(Eigen::MatrixXd(a), m);
}

}  // namespace satdomain
