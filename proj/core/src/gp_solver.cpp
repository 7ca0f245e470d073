#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "gp_internal.hpp"

namespace coldgas::gp {

namespace {

constexpr double kPi = std::numbers::pi;

using cplx = std::complex<double>;

// Complex <a, b> on the grid.
cplx cdot(const Field& a, const Field& b, double dv) {
  long double re = 0.0L, im = 0.0L;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const cplx v = std::conj(a[k]) * b[k];
    re += v.real();
    im += v.imag();
  }
  return {static_cast<double>(re * dv), static_cast<double>(im * dv)};
}

void project_out(Field& v, const Field& phi, double dv) {
  const cplx c = cdot(phi, v, dv);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * phi[k];
}

Field random_start(const GPConfig& cfg, const detail::Grid& grid, std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  Field phi(grid.size);
  for (auto& v : phi) v = cplx(normal(rng), normal(rng));
  // Correlated over a few tenths of the cloud radius, then confined to it.
  const double R = detail::cloud_radius(cfg);
  const double corr = 0.3 * R;
  grid.precondition(phi, 1.0 / (corr * corr));
  grid.precondition(phi, 1.0 / (corr * corr));
  const int n = grid.n;
  const int nz = grid.dim == 3 ? n : 1;
  std::size_t k = 0;
  for (int iz = 0; iz < nz; ++iz) {
    const double z = grid.dim == 3 ? grid.coord[iz] : 0.0;
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix, ++k) {
        const double r2 = grid.coord[ix] * grid.coord[ix] + grid.coord[iy] * grid.coord[iy] + z * z;
        phi[k] *= std::exp(-0.5 * r2 / (R * R));
      }
    }
  }
  return phi;
}

struct RunResult {
  Field phi;
  std::vector<double> history;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

// Preconditioned Polak-Ribiere conjugate gradient on the unit sphere. Each
// step moves to (phi + tau d)/|phi + tau d|; the energy along that curve is a
// rational function of tau with coefficients from a few grid sums, so the
// line search costs no extra operator applications and only accepts steps
// that lower the energy.
RunResult run(const GPConfig& cfg, const detail::Grid& grid, Field phi, const SolverOptions& opts) {
  const double dv = grid.dv;
  const double c4 = 4.0 * kPi * cfg.g;
  const double c8 = 2.0 * c4;
  {
    const double nn = grid.norm_sq(phi);
    if (!(nn > 0.0)) throw DomainError("gp_solver", "starting field is zero");
    for (auto& v : phi) v /= std::sqrt(nn);
  }

  RunResult out;
  Field Aphi, r, p, p_prev, r_prev, d, Ad;
  double tau_guess = 1.0;
  for (int it = 0;; ++it) {
    grid.linear(phi, Aphi, cfg.omega);
    const double a0 = grid.dot_re(phi, Aphi);
    long double q0 = 0.0L, trap = 0.0L;
    for (std::size_t k = 0; k < grid.size; ++k) {
      const double u = std::norm(phi[k]);
      q0 += static_cast<long double>(u) * u;
      trap += static_cast<long double>(grid.V[k]) * u;
    }
    const double Q0 = static_cast<double>(q0 * dv);
    out.history.push_back(a0 + c4 * Q0);

    r.resize(grid.size);
    for (std::size_t k = 0; k < grid.size; ++k) r[k] = Aphi[k] + c8 * std::norm(phi[k]) * phi[k];
    const double mu = grid.dot_re(phi, r);
    for (std::size_t k = 0; k < grid.size; ++k) r[k] -= mu * phi[k];
    out.residual = std::sqrt(grid.norm_sq(r));
    out.iterations = it;
    if (out.residual <= opts.tol) {
      out.converged = true;
      break;
    }
    if (it >= opts.max_iter) break;

    const double alpha = std::max(static_cast<double>(trap * dv) + c8 * Q0, 1e-3);
    p = r;
    grid.precondition(p, alpha);
    project_out(p, phi, dv);

    double beta = 0.0;
    if (!p_prev.empty()) {
      long double num = 0.0L;
      for (std::size_t k = 0; k < grid.size; ++k) {
        const cplx dp = p[k] - p_prev[k];
        num += static_cast<long double>(r[k].real()) * dp.real() +
               static_cast<long double>(r[k].imag()) * dp.imag();
      }
      const double den = grid.dot_re(r_prev, p_prev);
      if (den > 0.0) beta = std::max(0.0, static_cast<double>(num * dv) / den);
    }
    if (d.empty() || beta == 0.0) {
      d.assign(p.size(), 0.0);
      beta = 0.0;
    }
    for (std::size_t k = 0; k < grid.size; ++k) d[k] = -p[k] + beta * d[k];
    project_out(d, phi, dv);
    if (grid.dot_re(r, d) >= 0.0) {
      for (std::size_t k = 0; k < grid.size; ++k) d[k] = -p[k];
    }
    p_prev = p;
    r_prev = r;

    // Coefficients of the energy along the step.
    grid.linear(d, Ad, cfg.omega);
    const double a1 = grid.dot_re(phi, Ad);
    const double a2 = grid.dot_re(d, Ad);
    const double n1 = grid.dot_re(phi, d);
    const double n2 = grid.norm_sq(d);
    long double s1 = 0.0L, s2 = 0.0L, s3 = 0.0L, s4 = 0.0L;
    for (std::size_t k = 0; k < grid.size; ++k) {
      const long double u = std::norm(phi[k]);
      const long double v = 2.0 * (std::conj(phi[k]) * d[k]).real();
      const long double w = std::norm(d[k]);
      s1 += 2.0L * u * v;
      s2 += v * v + 2.0L * u * w;
      s3 += 2.0L * v * w;
      s4 += w * w;
    }
    const double q1 = static_cast<double>(s1 * dv), q2 = static_cast<double>(s2 * dv);
    const double q3 = static_cast<double>(s3 * dv), q4 = static_cast<double>(s4 * dv);
    auto dE = [&](double t) {
      const double dn = t * (2.0 * n1 + t * n2);  // |phi + t d|^2 - 1
      const double nrm = 1.0 + dn;
      const double lin = (2.0 * t * (a1 - a0 * n1) + t * t * (a2 - a0 * n2)) / nrm;
      const double dq = t * (q1 + t * (q2 + t * (q3 + t * q4)));
      const double quart = (dq - Q0 * dn * (2.0 + dn)) / (nrm * nrm);
      return lin + c4 * quart;
    };

    double t = tau_guess;
    int shrink = 0;
    while (!(dE(t) < 0.0) && shrink < 60) {
      t *= 0.5;
      ++shrink;
    }
    if (!(dE(t) < 0.0)) break;  // no representable decrease left
    double hi = t;
    for (int grow = 0; grow < 60 && dE(2.0 * hi) < dE(hi); ++grow) hi *= 2.0;
    hi *= 2.0;
    const auto best = boost::math::tools::brent_find_minima(dE, 0.0, hi, 40);
    if (best.second < dE(t)) t = best.first;
    tau_guess = t;

    const double scale = 1.0 / std::sqrt(1.0 + t * (2.0 * n1 + t * n2));
    for (std::size_t k = 0; k < grid.size; ++k) phi[k] = scale * (phi[k] + t * d[k]);
  }
  out.phi = std::move(phi);
  return out;
}

GPState finish(const GPConfig& cfg, RunResult&& run_result, std::uint64_t seed, int restart) {
  GPState st;
  st.config = cfg;
  st.phi = std::move(run_result.phi);
  fix_global_phase(st.phi);
  // An unconverged iterate may still be rough; it is reported, not judged.
  st.energy = gp_energy(st.phi, cfg, run_result.converged);
  const Residual res = gp_residual(st.phi, cfg);
  st.mu = res.mu;
  st.residual_norm = res.norm;
  st.iterations = run_result.iterations;
  st.converged = run_result.converged;
  st.seed = seed;
  st.restart = restart;
  st.energy_history = std::move(run_result.history);
  return st;
}

}  // namespace

GPState minimize_gp_from(const GPConfig& cfg, Field start, SolverOptions opts) {
  cfg.validate();
  if (start.size() != cfg.points()) throw DomainError("gp_solver", "field size does not match grid");
  const detail::Grid grid(cfg);
  GPState st = finish(cfg, run(cfg, grid, std::move(start), opts), 0, 0);
  if (!st.converged) {
    std::ostringstream os;
    os << "residual " << st.residual_norm << " above tolerance " << opts.tol << " after "
       << st.iterations << " iterations";
    throw NotConverged(os.str(), std::move(st));
  }
  return st;
}

GPState minimize_gp(const GPConfig& cfg, std::uint64_t seed, SolverOptions opts) {
  cfg.validate();
  if (opts.restarts < 1) throw DomainError("gp_solver", "restarts must be >= 1");
  const detail::Grid grid(cfg);
  std::optional<GPState> best;
  for (int restart = 0; restart < opts.restarts; ++restart) {
    GPState st = finish(cfg, run(cfg, grid, random_start(cfg, grid, seed, restart), opts), seed,
                        restart);
    const bool better = !best || (st.converged && !best->converged) ||
                        (st.converged == best->converged && st.energy.total < best->energy.total);
    if (better) best = std::move(st);
  }
  if (!best->converged) {
    std::ostringstream os;
    os << "no restart reached residual " << opts.tol << " (best " << best->residual_norm << ")";
    throw NotConverged(os.str(), std::move(*best));
  }
  return std::move(*best);
}

}  // namespace coldgas::gp
