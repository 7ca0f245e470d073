#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "coldgas/eigensolver.hpp"
#include "coldgas/lll.hpp"
#include "lll_internal.hpp"

namespace coldgas::lll {

namespace {

// Inserts v into a descending-sorted vector.
void insert_desc(std::vector<int>& parts, int v) {
  parts.insert(std::upper_bound(parts.begin(), parts.end(), v, std::greater<>()), v);
}

void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0) v = -v;
}

}  // namespace

DeltaBlock delta_matrix(int N, int L, double beta, std::size_t size_cap) {
  DeltaBlock block;
  block.basis = enumerate_basis(N, L, size_cap);
  const Basis& basis = block.basis;
  const auto norms = bargmann_norms(basis, beta);
  const auto dim = static_cast<Eigen::Index>(basis.size());

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<int> rest;
  std::vector<int> image;
  for (std::size_t row = 0; row < basis.size(); ++row) {
    const auto& mu = basis.states[row].parts;
    const auto occ = basis.states[row].occupations();
    const int top = static_cast<int>(occ.size()) - 1;
    // Coefficient of m_mu in Delta m_lambda equals the coefficient of the
    // monomial z^mu. A pair (i, j) of positions holding values (p, q) is hit
    // by delta_ij from every composition that agrees with mu off (i, j) and
    // carries (a, p + q - a) there, each with weight C(p+q, p) / 2^{p+q}.
    for (int p = 0; p <= top; ++p) {
      if (occ[p] == 0) continue;
      for (int q = p; q <= top; ++q) {
        if (occ[q] == 0) continue;
        const double pairs = p == q ? 0.5 * occ[p] * (occ[p] - 1.0) : 1.0 * occ[p] * occ[q];
        if (pairs == 0.0) continue;
        rest = mu;
        rest.erase(std::find(rest.begin(), rest.end(), p));
        rest.erase(std::find(rest.begin(), rest.end(), q));
        const int s = p + q;
        const double weight = pairs * detail::half_binomial(s, p);
        for (int a = 0; a <= s; ++a) {
          image = rest;
          insert_desc(image, a);
          insert_desc(image, s - a);
          const std::size_t col = basis.index_of(image);
          // Orthonormal basis: scale by ||m_mu|| / ||m_lambda||.
          const double scale = std::exp(0.5 * (norms[row].log_norm_sq - norms[col].log_norm_sq));
          triplets.emplace_back(static_cast<int>(row), static_cast<int>(col),
                                delta_unit() * weight * scale);
        }
      }
    }
  }
  block.matrix.resize(dim, dim);
  block.matrix.setFromTriplets(triplets.begin(), triplets.end());
  block.matrix.makeCompressed();
  return block;
}

YrastPoint yrast(int N, int L, EigenOptions opts, std::size_t size_cap) {
  const DeltaBlock block = delta_matrix(N, L, kDefaultBeta, size_cap);
  YrastPoint pt;
  pt.N = N;
  pt.L = L;
  pt.dim = block.basis.size();

  linalg::LowestCluster cluster;
  if (pt.dim <= opts.dense_limit) {
    cluster = linalg::lowest_cluster_dense(Eigen::MatrixXd(block.matrix), opts.degeneracy_tol);
  } else {
    linalg::LanczosOptions lo;
    lo.tol = opts.lanczos_tol;
    cluster = linalg::lowest_cluster_lanczos(block.matrix, opts.degeneracy_tol, lo);
  }
  double lowest = cluster.values.front();
  if (lowest < -1e-10) {
    std::ostringstream os;
    os << "Delta_N block (N=" << N << ", L=" << L << ") has negative eigenvalue " << lowest;
    throw Error("lll_ed", "NotPositive", os.str());
  }
  pt.delta_min = std::max(lowest, 0.0);
  pt.degeneracy = static_cast<int>(cluster.values.size());
  pt.ground_vector = cluster.vectors.col(0);
  fix_sign(pt.ground_vector);
  return pt;
}

std::vector<YrastPoint> yrast_table(int N, int L_max, EigenOptions opts, std::size_t size_cap) {
  std::vector<YrastPoint> table;
  table.reserve(static_cast<std::size_t>(L_max) + 1);
  for (int L = 0; L <= L_max; ++L) table.push_back(yrast(N, L, opts, size_cap));
  return table;
}

std::optional<double> yrast_closed_form(int N, int L) {
  if (N < 1 || L < 0) throw DomainError("lll_ed", "need N >= 1 and L >= 0");
  const double n = N;
  if (L >= N * (N - 1)) return 0.0;
  if (L <= 1) return delta_unit() * 0.5 * n * (n - 1.0);
  if (L <= N) return delta_unit() * 0.5 * n * (n - 1.0 - 0.5 * L);
  return std::nullopt;
}

std::vector<std::int64_t> laughlin_coefficients(const Basis& basis) {
  const int N = basis.N;
  if (N > 16) throw SizeLimit("Laughlin expansion limited to N <= 16");
  if (basis.L != N * (N - 1)) {
    throw DomainError("lll_ed", "Laughlin state lives at L = N(N-1)");
  }
  // prod_{i<j} (z_i - z_j)^2 = V^2 with V = det[z_i^k] = sum_sigma sgn(sigma)
  // prod_i z_i^{sigma(i)}. The coefficient of z^mu is the signed count of
  // pairs (sigma, tau) with sigma(i) + tau(i) = mu_i for every i.
  std::vector<std::int64_t> coeffs(basis.size(), 0);
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    const auto& mu = basis.states[idx].parts;
    if (mu.front() > 2 * (N - 1)) continue;
    std::int64_t total = 0;
    // Depth-first over positions; parity tracks inversions of sigma and tau.
    auto dfs = [&](auto&& self, int i, unsigned sigma_used, unsigned tau_used, int parity) -> void {
      if (i == N) {
        const std::int64_t sign = (parity & 1) ? -1 : 1;
        if (__builtin_add_overflow(total, sign, &total)) {
          throw SizeLimit("Laughlin coefficient overflows 64 bits");
        }
        return;
      }
      for (int s = 0; s < N; ++s) {
        if (sigma_used & (1u << s)) continue;
        const int t = mu[i] - s;
        if (t < 0 || t >= N || (tau_used & (1u << t))) continue;
        const int inv_s = __builtin_popcount(sigma_used >> (s + 1));
        const int inv_t = __builtin_popcount(tau_used >> (t + 1));
        self(self, i + 1, sigma_used | (1u << s), tau_used | (1u << t), parity + inv_s + inv_t);
      }
    };
    dfs(dfs, 0, 0u, 0u, 0);
    coeffs[idx] = total;
  }
  return coeffs;
}

LaughlinResult laughlin_residual(int N, std::size_t size_cap) {
  if (N < 1) throw DomainError("lll_ed", "N must be >= 1");
  const int L = N * (N - 1);
  const DeltaBlock block = delta_matrix(N, L, kDefaultBeta, size_cap);
  const auto coeffs = laughlin_coefficients(block.basis);
  const auto norms = bargmann_norms(block.basis, kDefaultBeta);

  // Orthonormal coordinates c_lambda ||m_lambda||, rescaled by a common factor.
  double ref = -std::numeric_limits<double>::infinity();
  for (const auto& n : norms) ref = std::max(ref, n.log_norm_sq);
  Eigen::VectorXd x(static_cast<Eigen::Index>(block.basis.size()));
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    x(static_cast<Eigen::Index>(i)) =
        static_cast<double>(coeffs[i]) * std::exp(0.5 * (norms[i].log_norm_sq - ref));
  }
  LaughlinResult out;
  out.N = N;
  out.L = L;
  out.dim = block.basis.size();
  const double xn = x.norm();
  out.residual = (block.matrix * x).norm() / xn;
  out.vector = x / xn;
  fix_sign(out.vector);
  return out;
}

std::vector<HLLLScanRow> hll_ground_scan(const std::vector<YrastPoint>& table,
                                         const std::vector<double>& kappa_grid) {
  if (table.empty()) throw DomainError("lll_ed", "empty yrast table");
  std::vector<HLLLScanRow> rows;
  rows.reserve(kappa_grid.size());
  for (double kappa : kappa_grid) {
    if (!(kappa >= 0.0)) throw DomainError("lll_ed", "kappa must be >= 0");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pt : table) best = std::min(best, kappa * pt.L + pt.delta_min);
    HLLLScanRow row{kappa, 0, best};
    int best_L = std::numeric_limits<int>::max();
    for (const auto& pt : table) {
      const double e = kappa * pt.L + pt.delta_min;
      if (e <= best + 1e-12 && pt.L < best_L) {
        best_L = pt.L;
        row.E0 = e;
      }
    }
    row.L_star = best_L;
    rows.push_back(row);
  }
  return rows;
}

std::vector<HLLLScanRow> hll_ground_scan(int N, const std::vector<double>& kappa_grid,
                                         EigenOptions opts) {
  return hll_ground_scan(yrast_table(N, N * (N - 1), opts), kappa_grid);
}

std::vector<int> hull_vertices(const std::vector<YrastPoint>& table) {
  std::vector<std::pair<double, double>> pts;
  double scale = 1.0;
  for (const auto& p : table) {
    pts.emplace_back(p.L, p.delta_min);
    scale = std::max(scale, std::abs(p.delta_min) * std::max(1, p.L));
  }
  std::sort(pts.begin(), pts.end());
  const double eps = 1e-12 * scale;
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull.back();
      const double cross = (a.first - o.first) * (p.second - o.second) -
                           (a.second - o.second) * (p.first - o.first);
      if (cross <= eps) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  std::vector<int> out;
  for (const auto& h : hull) out.push_back(static_cast<int>(h.first));
  return out;
}

std::vector<double> hull_breakpoints(const std::vector<YrastPoint>& table) {
  const auto verts = hull_vertices(table);
  auto delta_at = [&](int L) {
    for (const auto& p : table) {
      if (p.L == L) return p.delta_min;
    }
    return 0.0;
  };
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
    out.push_back(-(delta_at(verts[i + 1]) - delta_at(verts[i])) / (verts[i + 1] - verts[i]));
  }
  return out;
}

}  // namespace coldgas::lll
