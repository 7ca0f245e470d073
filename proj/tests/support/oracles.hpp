#pragma once

// Reference implementations used only by the tests. None of them calls into
// the library; they take the slow, literal route on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace coldgas::oracle {

inline constexpr double kPi = std::numbers::pi;

// ---- combinatorics ----------------------------------------------------------

/// Counts partitions of L into at most N parts by walking every one of them.
inline std::uint64_t partition_count_walk(int N, int L) {
  std::function<std::uint64_t(int, int, int)> walk = [&](int remaining, int parts_left, int cap) {
    if (remaining == 0) return std::uint64_t{1};
    if (parts_left == 0) return std::uint64_t{0};
    std::uint64_t n = 0;
    for (int p = std::min(cap, remaining); p >= 1; --p) n += walk(remaining - p, parts_left - 1, p);
    return n;
  };
  return walk(L, N, L);
}

/// Euler's pentagonal recurrence for p(n), the unrestricted partition count.
inline std::uint64_t partition_number(int n) {
  std::vector<std::uint64_t> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int m = 1; m <= n; ++m) {
    std::int64_t acc = 0;
    for (int k = 1;; ++k) {
      const int g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
      if (g1 > m) break;
      const std::int64_t sign = (k % 2) ? 1 : -1;
      acc += sign * static_cast<std::int64_t>(p[m - g1]);
      if (g2 <= m) acc += sign * static_cast<std::int64_t>(p[m - g2]);
    }
    p[m] = static_cast<std::uint64_t>(acc);
  }
  return p[n];
}

// ---- special functions ------------------------------------------------------

/// sum_k z^k / k^s by brute summation. For z = 1 the remainder after K terms
/// is added from the Euler-Maclaurin formula (error ~ K^{-s-3}).
inline double polylog_sum(double s, double z, long K = 2000000) {
  long double acc = 0.0L;
  long double zk = 1.0L;
  for (long k = 1; k <= K; ++k) {
    zk *= z;
    if (z < 1.0 && zk < 1e-25L) break;
    acc += zk / std::pow(static_cast<long double>(k), static_cast<long double>(s));
  }
  if (z == 1.0) {
    const long double Kl = static_cast<long double>(K);
    acc += std::pow(Kl, 1.0L - s) / (s - 1.0L) - 0.5L * std::pow(Kl, -s) +
           s / 12.0L * std::pow(Kl, -s - 1.0L);
  }
  return static_cast<double>(acc);
}

/// Bisection on rho = (T/4pi)^{3/2} g_{3/2}(e^{mu/T}) using polylog_sum.
inline double mu_for_density(double rho, double T) {
  const double lam = std::pow(T / (4.0 * kPi), 1.5);
  double lo = -50.0 * T, hi = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (lam * polylog_sum(1.5, std::exp(mid / T), 20000) < rho) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---- scattering -------------------------------------------------------------

/// a for a constant barrier of height h on [0, R) by a fine RK4 of
/// u'' = (h/2) u, u(0) = 0, u'(0) = 1; outside, u = c (r - a) so
/// a = R - u(R) / u'(R).
inline double barrier_scattering_length(double h, double R, int steps = 200000) {
  const double k2 = 0.5 * h;
  const double dr = R / steps;
  double u = 0.0, up = 1.0;
  for (int i = 0; i < steps; ++i) {
    const double k1u = up, k1p = k2 * u;
    const double k2u = up + 0.5 * dr * k1p, k2p = k2 * (u + 0.5 * dr * k1u);
    const double k3u = up + 0.5 * dr * k2p, k3p = k2 * (u + 0.5 * dr * k2u);
    const double k4u = up + dr * k3p, k4p = k2 * (u + dr * k3u);
    u += dr / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    up += dr / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
  }
  return R - u / up;
}

// ---- lowest Landau level ----------------------------------------------------

inline double factorial(int n) { return std::tgamma(n + 1.0); }

/// Delta_N at fixed (N, L) assembled in second quantisation on occupation
/// vectors: H = (1/2) sum V(m1 m2; m3 m4) a+_m1 a+_m2 a_m3 a_m4 with
/// V = (2pi)^{-3/2} M! / (2^M sqrt(m1! m2! m3! m4!)), M = m1 + m2 = m3 + m4.
/// `states` are occupation vectors (length >= L + 1), all with N particles and
/// angular momentum L. Returns the dense matrix in that order.
inline Eigen::MatrixXd second_quantized_delta(const std::vector<std::vector<int>>& states, int L) {
  const double unit = std::pow(2.0 * kPi, -1.5);
  const int modes = L + 1;
  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::vector<int> occ(states[i]);
    occ.resize(modes, 0);
    index[occ] = static_cast<int>(i);
  }
  const int dim = static_cast<int>(states.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& [occ, col] : index) {
    for (int m3 = 0; m3 < modes; ++m3) {
      for (int m4 = 0; m4 < modes; ++m4) {
        std::vector<int> w(occ);
        double amp = std::sqrt(static_cast<double>(w[m4]));
        if (amp == 0.0) continue;
        --w[m4];
        amp *= std::sqrt(static_cast<double>(w[m3]));
        if (amp == 0.0) continue;
        --w[m3];
        const int M = m3 + m4;
        for (int m1 = 0; m1 <= M && m1 < modes; ++m1) {
          const int m2 = M - m1;
          if (m2 >= modes) continue;
          std::vector<int> v(w);
          ++v[m2];
          double a2 = amp * std::sqrt(static_cast<double>(v[m2]));
          ++v[m1];
          a2 *= std::sqrt(static_cast<double>(v[m1]));
          const double V = unit * factorial(M) / std::pow(2.0, M) /
                           std::sqrt(factorial(m1) * factorial(m2) * factorial(m3) * factorial(m4));
          H(index.at(v), col) += 0.5 * V * a2;
        }
      }
    }
  }
  return H;
}

/// Multiplies out prod_{i<j} (z_i - z_j)^2 and returns the coefficient of
/// every monomial, keyed by its exponent vector.
inline std::map<std::vector<int>, std::int64_t> laughlin_expansion(int N) {
  std::map<std::vector<int>, std::int64_t> poly{{std::vector<int>(N, 0), 1}};
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      for (int rep = 0; rep < 2; ++rep) {
        std::map<std::vector<int>, std::int64_t> next;
        for (const auto& [e, c] : poly) {
          auto a = e;
          ++a[i];
          next[a] += c;
          auto b = e;
          ++b[j];
          next[b] -= c;
        }
        poly.clear();
        for (auto& [e, c] : next) {
          if (c != 0) poly.emplace(e, c);
        }
      }
    }
  }
  return poly;
}

/// Vertices of the lower convex hull of (x_i, y_i) by testing every point
/// against every chord around it; points on a chord are not vertices.
inline std::vector<int> lower_hull_brute(const std::vector<double>& y, double tol = 1e-12) {
  const int n = static_cast<int>(y.size());
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    bool vertex = true;
    for (int j = 0; j < i && vertex; ++j) {
      for (int k = i + 1; k < n && vertex; ++k) {
        const double chord = y[j] + (y[k] - y[j]) * (i - j) / static_cast<double>(k - j);
        if (y[i] >= chord - tol) vertex = false;
      }
    }
    if (vertex) out.push_back(i);
  }
  return out;
}

/// \int_C |z|^{2m} e^{-beta |z|^2} d^2z by Simpson's rule in r.
inline double mode_norm_sq_quadrature(int m, double beta, int panels = 20000) {
  const double rmax = std::sqrt((2.0 * m + 80.0) / beta);
  const double h = rmax / panels;
  auto f = [&](double r) { return 2.0 * kPi * r * std::pow(r, 2.0 * m) * std::exp(-beta * r * r); };
  double acc = f(0.0) + f(rmax);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return acc * h / 3.0;
}

}  // namespace coldgas::oracle
