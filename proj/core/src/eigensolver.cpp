#include "coldgas/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace coldgas::linalg {

namespace {

// Two passes of classical Gram-Schmidt against the columns of q.
void orthogonalize(Eigen::VectorXd& w, const Eigen::MatrixXd& q, Eigen::Index cols) {
  if (cols == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd c = q.leftCols(cols).transpose() * w;
    w -= q.leftCols(cols) * c;
  }
}

struct RitzPair {
  double value;
  Eigen::VectorXd vector;
};

RitzPair lanczos_lowest(const Eigen::SparseMatrix<double>& a, const Eigen::MatrixXd& locked,
                        Eigen::Index n_locked, Eigen::VectorXd x, const LanczosOptions& opts) {
  const Eigen::Index n = a.rows();
  const Eigen::Index free_dim = n - n_locked;
  const Eigen::Index m = std::min<Eigen::Index>(opts.krylov_dim, free_dim);

  orthogonalize(x, locked, n_locked);
  x.normalize();

  RitzPair best{0.0, x};
  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    Eigen::MatrixXd v(n, m);
    Eigen::VectorXd alpha(m);
    Eigen::VectorXd beta(m);
    v.col(0) = x;
    Eigen::Index k = 0;
    bool invariant = false;
    for (; k < m; ++k) {
      Eigen::VectorXd w = a * v.col(k);
      alpha(k) = v.col(k).dot(w);
      orthogonalize(w, v, k + 1);
      orthogonalize(w, locked, n_locked);
      beta(k) = w.norm();
      if (k + 1 == m) {
        ++k;
        break;
      }
      if (beta(k) < 1e-14 * std::max(1.0, std::abs(alpha(k)))) {
        ++k;
        invariant = true;
        break;
      }
      v.col(k + 1) = w / beta(k);
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      t(i, i) = alpha(i);
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double theta = es.eigenvalues()(0);
    x = v.leftCols(k) * es.eigenvectors().col(0);
    orthogonalize(x, locked, n_locked);
    x.normalize();
    best = {theta, x};

    const double res = (a * x - theta * x).norm();
    if (res <= opts.tol || invariant) return best;
  }
  return best;
}

}  // namespace

LowestCluster lowest_cluster_dense(const Eigen::MatrixXd& a, double window) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  const auto& vals = es.eigenvalues();
  Eigen::Index count = 1;
  while (count < vals.size() && vals(count) - vals(0) <= window) ++count;
  LowestCluster out;
  out.values.assign(vals.data(), vals.data() + count);
  out.vectors = es.eigenvectors().leftCols(count);
  return out;
}

LowestCluster lowest_cluster_lanczos(const Eigen::SparseMatrix<double>& a, double window,
                                     LanczosOptions opts) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd locked(n, std::min<Eigen::Index>(n, 16));
  Eigen::Index n_locked = 0;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  LowestCluster out;
  while (n_locked < n) {
    Eigen::VectorXd start(n);
    for (Eigen::Index i = 0; i < n; ++i) start(i) = uni(rng);
    RitzPair p = lanczos_lowest(a, locked, n_locked, start, opts);
    if (!out.values.empty() && p.value - out.values.front() > window) break;
    if (n_locked == locked.cols()) locked.conservativeResize(n, std::min(n, 2 * locked.cols()));
    locked.col(n_locked++) = p.vector;
    out.values.push_back(p.value);
  }
  // Lanczos may hand back members of a cluster slightly out of order.
  std::vector<Eigen::Index> order(out.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Eigen::Index>(i);
  std::sort(order.begin(), order.end(),
            [&](auto i, auto j) { return out.values[i] < out.values[j]; });
  std::vector<double> vals;
  out.vectors.resize(n, static_cast<Eigen::Index>(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    vals.push_back(out.values[order[i]]);
    out.vectors.col(static_cast<Eigen::Index>(i)) = locked.col(order[i]);
  }
  out.values = std::move(vals);
  return out;
}

}  // namespace coldgas::linalg
