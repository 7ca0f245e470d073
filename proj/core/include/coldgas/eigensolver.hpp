#pragma once

// Lowest eigenpairs of real symmetric matrices: dense (Eigen) for small
// blocks, restarted Lanczos with full reorthogonalisation and locking above.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace coldgas::linalg {

struct LowestCluster {
  /// Every eigenvalue within `window` of the smallest, ascending.
  std::vector<double> values;
  /// Matching orthonormal eigenvectors as columns.
  Eigen::MatrixXd vectors;
};

LowestCluster lowest_cluster_dense(const Eigen::MatrixXd& a, double window);

struct LanczosOptions {
  int krylov_dim = 60;
  int max_restarts = 500;
  double tol = 1e-11;  // residual norm ||A x - theta x||
  std::uint64_t seed = 0x5eed;
};

LowestCluster lowest_cluster_lanczos(const Eigen::SparseMatrix<double>& a, double window,
                                     LanczosOptions opts = {});

}  // namespace coldgas::linalg
