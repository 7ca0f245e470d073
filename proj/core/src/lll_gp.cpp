#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "coldgas/lll.hpp"
#include "lll_internal.hpp"

namespace coldgas::lll {

namespace {

using cplx = std::complex<double>;
using Modes = std::vector<cplx>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// E(b) = (1/2) (2pi)^{-3/2} sum_M (M!/2^M) |S_M|^2,
// S_M = sum_{a + c = M} b_a b_c / sqrt(a! c!), in orthonormal mode coordinates.
class QuarticForm {
 public:
  explicit QuarticForm(int modes) : modes_(modes) {
    inv_sqrt_fact_.resize(static_cast<std::size_t>(modes));
    for (int m = 0; m < modes; ++m) inv_sqrt_fact_[m] = std::exp(-0.5 * detail::log_factorial(m));
    const int top = 2 * (modes - 1);
    weight_.resize(static_cast<std::size_t>(top) + 1);
    for (int M = 0; M <= top; ++M) {
      weight_[M] = std::exp(detail::log_factorial(M) - M * std::log(2.0));
    }
  }

  std::vector<cplx> pair_sums(const Modes& b) const {
    std::vector<cplx> s(weight_.size(), 0.0);
    for (int a = 0; a < modes_; ++a) {
      for (int c = 0; c < modes_; ++c) {
        s[a + c] += b[a] * b[c] * inv_sqrt_fact_[a] * inv_sqrt_fact_[c];
      }
    }
    return s;
  }

  double energy(const Modes& b) const {
    const auto s = pair_sums(b);
    double e = 0.0;
    for (std::size_t M = 0; M < s.size(); ++M) e += weight_[M] * std::norm(s[M]);
    return 0.5 * delta_unit() * e;
  }

  // G_k = 2 dE/d conj(b_k), so that dE = Re <G, db>.
  Modes gradient(const Modes& b) const {
    const auto s = pair_sums(b);
    Modes g(b.size(), 0.0);
    for (int k = 0; k < modes_; ++k) {
      cplx acc = 0.0;
      for (int j = 0; j < modes_; ++j) {
        acc += weight_[k + j] * s[k + j] * std::conj(b[j]) * inv_sqrt_fact_[j];
      }
      g[k] = 2.0 * delta_unit() * acc * inv_sqrt_fact_[k];
    }
    return g;
  }

 private:
  int modes_;
  std::vector<double> inv_sqrt_fact_;
  std::vector<double> weight_;
};

double re_dot(const Modes& x, const Modes& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (std::conj(x[i]) * y[i]).real();
  return s;
}

// Rescales |b_m|^2 -> |b_m|^2 e^{alpha + gamma m} so that sum |b|^2 = N and
// sum m |b|^2 = L. Returns false if the mean L/N is not reachable.
bool retract(Modes& b, double N, double L) {
  const double target = L / N;
  std::vector<double> p(b.size());
  double lo_m = std::numeric_limits<double>::infinity();
  double hi_m = -lo_m;
  for (std::size_t m = 0; m < b.size(); ++m) {
    p[m] = std::norm(b[m]);
    if (p[m] > 0.0) {
      lo_m = std::min(lo_m, static_cast<double>(m));
      hi_m = std::max(hi_m, static_cast<double>(m));
    }
  }
  if (!(target > lo_m && target < hi_m)) return false;

  auto moments = [&](double gamma, double& mean, double& var) {
    double z = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t m = 0; m < p.size(); ++m) {
      if (p[m] == 0.0) continue;
      const double w = p[m] * std::exp(gamma * (static_cast<double>(m) - target));
      z += w;
      s1 += w * static_cast<double>(m);
      s2 += w * static_cast<double>(m) * static_cast<double>(m);
    }
    mean = s1 / z;
    var = s2 / z - mean * mean;
  };

  double lo = -60.0, hi = 60.0, gamma = 0.0;
  for (int it = 0; it < 200; ++it) {
    double mean = 0.0, var = 0.0;
    moments(gamma, mean, var);
    const double f = mean - target;
    if (std::abs(f) <= 1e-15 * std::max(1.0, target)) break;
    if (f > 0.0) {
      hi = gamma;
    } else {
      lo = gamma;
    }
    double next = var > 0.0 ? gamma - f / var : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    gamma = next;
  }
  double norm = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    norm += p[m] * std::exp(gamma * (static_cast<double>(m) - target));
  }
  const double alpha = std::log(N / norm);
  for (std::size_t m = 0; m < b.size(); ++m) {
    b[m] *= std::exp(0.5 * (alpha + gamma * (static_cast<double>(m) - target)));
  }
  return true;
}

Modes tangent_part(const Modes& g, const Modes& b) {
  // Remove the components along the constraint gradients b and m b.
  Modes mb(b.size());
  for (std::size_t m = 0; m < b.size(); ++m) mb[m] = static_cast<double>(m) * b[m];
  const double a11 = re_dot(b, b), a12 = re_dot(b, mb), a22 = re_dot(mb, mb);
  const double r1 = re_dot(b, g), r2 = re_dot(mb, g);
  const double det = a11 * a22 - a12 * a12;
  double l1 = 0.0, l2 = 0.0;
  if (det > 1e-12 * a11 * a22) {
    l1 = (r1 * a22 - r2 * a12) / det;
    l2 = (a11 * r2 - a12 * r1) / det;
  } else {
    // b concentrated on one mode: the two constraint gradients coincide.
    l1 = r1 / a11;
  }
  Modes t(g);
  for (std::size_t m = 0; m < b.size(); ++m) t[m] -= l1 * b[m] + l2 * mb[m];
  return t;
}

LLLGPResult fill(const QuarticForm& form, const Modes& b, int iterations, bool converged) {
  LLLGPResult r;
  r.mode_coefficients = b;
  r.energy = form.energy(b);
  for (std::size_t m = 0; m < b.size(); ++m) {
    r.norm_sq += std::norm(b[m]);
    r.angular_momentum += static_cast<double>(m) * std::norm(b[m]);
  }
  r.iterations = iterations;
  r.converged = converged;
  return r;
}

}  // namespace

LLLGPResult lll_gp_minimize(double N_weight, double L_target, int M_modes, LLLGPOptions opts) {
  if (M_modes < 2) throw DomainError("lll_ed", "need at least 2 modes");
  if (!(N_weight > 0.0)) throw DomainError("lll_ed", "N_weight must be > 0");
  if (!(L_target >= 0.0) || !(L_target < N_weight * (M_modes - 1))) {
    throw DomainError("lll_ed", "need 0 <= L_target < N_weight (M_modes - 1)");
  }
  const QuarticForm form(M_modes);
  if (L_target == 0.0) {
    Modes b(static_cast<std::size_t>(M_modes), 0.0);
    b[0] = std::sqrt(N_weight);
    return fill(form, b, 0, true);
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  LLLGPResult best;
  best.energy = std::numeric_limits<double>::infinity();
  bool any_converged = false;

  for (int start = 0; start < opts.restarts; ++start) {
    Modes b(static_cast<std::size_t>(M_modes));
    for (auto& x : b) x = cplx(normal(rng), normal(rng));
    if (!retract(b, N_weight, L_target)) continue;

    double e = form.energy(b);
    double step = 1.0 / (delta_unit() * N_weight);
    bool converged = false;
    int it = 0;
    Modes g_prev, b_prev;
    for (; it < opts.max_iter; ++it) {
      const Modes g = form.gradient(b);
      const Modes t = tangent_part(g, b);
      const double tn = std::sqrt(re_dot(t, t));
      const double gn = std::sqrt(re_dot(g, g));
      if (tn <= opts.tol * std::max(gn, 1e-300)) {
        converged = true;
        break;
      }
      // Barzilai-Borwein step from the previous iterate, then backtracking.
      if (!g_prev.empty()) {
        Modes db(b.size()), dg(b.size());
        for (std::size_t m = 0; m < b.size(); ++m) {
          db[m] = b[m] - b_prev[m];
          dg[m] = t[m] - g_prev[m];
        }
        const double sy = re_dot(db, dg);
        if (sy > 0.0) step = re_dot(db, db) / sy;
      }
      g_prev = t;
      b_prev = b;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls) {
        Modes trial(b.size());
        for (std::size_t m = 0; m < b.size(); ++m) trial[m] = b[m] - step * t[m];
        if (retract(trial, N_weight, L_target)) {
          const double et = form.energy(trial);
          // Near the minimum energy differences drop below rounding; then a
          // smaller projected gradient at equal energy also counts as progress.
          const bool flat = std::abs(et - e) <= 8.0 * kEps * std::abs(e) &&
                            std::sqrt(re_dot(tangent_part(form.gradient(trial), trial),
                                             tangent_part(form.gradient(trial), trial))) < tn;
          if (et <= e - 1e-4 * step * tn * tn || flat) {
            b = std::move(trial);
            e = et;
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
    auto r = fill(form, b, it, converged);
    any_converged = any_converged || converged;
    if (converged && (!best.converged || r.energy < best.energy)) best = r;
    if (!any_converged && r.energy < best.energy) best = r;
  }
  if (!any_converged) {
    std::ostringstream os;
    os << "LLL mean-field minimisation did not converge (best energy " << best.energy << ")";
    throw NotConverged(os.str());
  }
  return best;
}

}  // namespace coldgas::lll
