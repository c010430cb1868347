#pragma once

#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace satdomain {

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal
  double max_residual = 0.0;  // max_j ||A u_j - lambda_j u_j||
  bool iterative = false;     // produced by the sparse solver
};

/// The m smallest eigenpairs of a dense symmetric matrix.
EigenPairs smallest_eigenpairs_dense(const Eigen::MatrixXd& a, int m);

struct LanczosOptions {
  double shift = 1e-4;       // factorizes A + shift I; A must be positive semidefinite
  double tolerance = 1e-8;   // residual bound for acceptance
  int extra_block = 8;       // block size = m + extra_block
  int max_blocks = 6;        // Krylov blocks per cycle
  int max_cycles = 30;
  std::uint64_t seed = 0;
  Eigen::MatrixXd initial;   // optional warm-start columns (n rows); the rest of the block is random
};

/// Shift-invert block Lanczos with full reorthogonalization for the m smallest
/// eigenpairs of a sparse symmetric PSD matrix. Returns std::nullopt-like empty
/// values when the residual bound is not met.
EigenPairs smallest_eigenpairs_lanczos(const Eigen::SparseMatrix<double>& a, int m, const LanczosOptions& opt = {});

/// Dense solver up to `dense_limit` rows, block Lanczos above it with a dense fallback.
EigenPairs smallest_eigenpairs(const Eigen::SparseMatrix<double>& a, int m, std::size_t dense_limit = 512,
                               const LanczosOptions& opt = {});

/// Residual bound of a set of eigenpairs against A.
double eigen_residual(const Eigen::SparseMatrix<double>& a, const EigenPairs& p);

}  // namespace satdomain
