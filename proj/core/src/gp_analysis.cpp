#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <thread>

#include "gp_internal.hpp"

namespace coldgas::gp {

namespace {

constexpr double kPi = std::numbers::pi;

void require_2d(const Field& phi, const GPConfig& cfg) {
  if (cfg.dim != 2) throw DomainError("gp_solver", "vortex analysis needs dim = 2");
  if (phi.size() != cfg.points()) throw DomainError("gp_solver", "field size does not match grid");
}

double wrap(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

std::vector<Vortex> detect_vortices(const Field& phi, const GPConfig& cfg, double min_core_distance,
                                    double density_fraction) {
  require_2d(phi, cfg);
  const int n = cfg.grid_n;
  const double h = cfg.spacing();
  const auto x = cfg.coordinates();
  std::vector<double> rho(phi.size());
  double rho_max = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    rho[k] = std::norm(phi[k]);
    rho_max = std::max(rho_max, rho[k]);
  }
  if (rho_max == 0.0) return {};
  if (min_core_distance <= 0.0) {
    // Healing length 1/sqrt(8 pi g rho_max), capped by half the trap length.
    double ell = std::numeric_limits<double>::infinity();
    if (cfg.trap.s > 0.0) ell = std::pow(cfg.trap.s, -0.25);
    if (cfg.trap.q > 0.0) ell = std::min(ell, std::pow(cfg.trap.q, -1.0 / 6.0));
    double xi = 0.5 * ell;
    if (cfg.g > 0.0) xi = std::min(xi, 1.0 / std::sqrt(8.0 * kPi * cfg.g * rho_max));
    min_core_distance = std::max(3.0 * h, xi);
  }
  const int reach = static_cast<int>(std::ceil(min_core_distance / h)) + 1;
  auto idx = [n](int ix, int iy) { return static_cast<std::size_t>(ix + n * iy); };

  struct Cluster {
    double sx = 0.0, sy = 0.0;
    int members = 0;
    int winding = 0;
    double x0 = 0.0, y0 = 0.0;
  };
  std::vector<Cluster> clusters;
  for (int iy = 0; iy + 1 < n; ++iy) {
    for (int ix = 0; ix + 1 < n; ++ix) {
      const std::size_t c[4] = {idx(ix, iy), idx(ix + 1, iy), idx(ix + 1, iy + 1), idx(ix, iy + 1)};
      bool defined = true;
      for (auto k : c) defined = defined && rho[k] > 0.0;
      if (!defined) continue;
      double total = 0.0;
      for (int e = 0; e < 4; ++e) total += wrap(std::arg(phi[c[(e + 1) % 4]]) - std::arg(phi[c[e]]));
      const int w = static_cast<int>(std::lround(total / (2.0 * kPi)));
      if (w == 0) continue;
      const double px = x[ix] + 0.5 * h;
      const double py = x[iy] + 0.5 * h;
      double nearby = 0.0;
      for (int jy = std::max(0, iy - reach); jy <= std::min(n - 1, iy + 1 + reach); ++jy) {
        for (int jx = std::max(0, ix - reach); jx <= std::min(n - 1, ix + 1 + reach); ++jx) {
          const double dx = x[jx] - px, dy = x[jy] - py;
          if (dx * dx + dy * dy <= min_core_distance * min_core_distance) {
            nearby = std::max(nearby, rho[idx(jx, jy)]);
          }
        }
      }
      if (nearby < density_fraction * rho_max) continue;
      bool joined = false;
      for (auto& cl : clusters) {
        const double dx = px - cl.x0, dy = py - cl.y0;
        if (dx * dx + dy * dy < min_core_distance * min_core_distance) {
          cl.sx += px;
          cl.sy += py;
          ++cl.members;
          cl.winding += w;
          joined = true;
          break;
        }
      }
      if (!joined) clusters.push_back({px, py, 1, w, px, py});
    }
  }
  std::vector<Vortex> out;
  for (const auto& cl : clusters) {
    if (cl.winding == 0) continue;
    out.push_back({cl.sx / cl.members, cl.sy / cl.members, cl.winding});
  }
  return out;
}

double anisotropy(const Field& phi, const GPConfig& cfg) {
  require_2d(phi, cfg);
  const int n = cfg.grid_n;
  // Twice the offset from the centre, in grid units, is an integer.
  std::map<long long, std::pair<long double, int>> shells;
  auto key = [n](int ix, int iy) {
    const long long a = 2LL * ix - n + 1, b = 2LL * iy - n + 1;
    return a * a + b * b;
  };
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      auto& s = shells[key(ix, iy)];
      s.first += std::norm(phi[static_cast<std::size_t>(ix + n * iy)]);
      ++s.second;
    }
  }
  long double dev = 0.0L, total = 0.0L;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const auto& s = shells[key(ix, iy)];
      const long double rho = std::norm(phi[static_cast<std::size_t>(ix + n * iy)]);
      const long double d = rho - s.first / s.second;
      dev += d * d;
      total += rho * rho;
    }
  }
  if (total == 0.0L) return 0.0;
  return static_cast<double>(std::sqrt(dev / total));
}

ScanResult symmetry_breaking_scan(const GPConfig& base, const std::vector<double>& g_grid,
                                  const std::vector<std::uint64_t>& seeds, SolverOptions opts,
                                  int jobs) {
  if (base.dim != 2) throw DomainError("gp_solver", "symmetry-breaking scan needs dim = 2");
  if (!(base.trap.q > 0.0)) throw DomainError("gp_solver", "symmetry-breaking scan needs q > 0");
  if (g_grid.empty() || seeds.empty()) throw DomainError("gp_solver", "empty g grid or seed list");
  for (double g : g_grid) {
    GPConfig c = base;
    c.g = g;
    c.validate();
  }
  opts.restarts = 1;

  const std::size_t tasks = g_grid.size() * seeds.size();
  std::vector<std::optional<GPState>> results(tasks);
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t t = next++; t < tasks; t = next++) {
      GPConfig c = base;
      c.g = g_grid[t / seeds.size()];
      try {
        results[t] = minimize_gp(c, seeds[t % seeds.size()], opts);
      } catch (const NotConverged& e) {
        results[t] = e.best();
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks)));
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ScanResult out;
  for (std::size_t gi = 0; gi < g_grid.size(); ++gi) {
    const GPState* best = nullptr;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      const GPState& st = *results[gi * seeds.size() + si];
      const bool better = !best || (st.converged && !best->converged) ||
                          (st.converged == best->converged && st.energy.total < best->energy.total);
      if (better) best = &st;
    }
    ScanRow row;
    row.g = g_grid[gi];
    row.anisotropy = anisotropy(best->phi, best->config);
    const auto vortices = detect_vortices(best->phi, best->config);
    row.vortex_count = static_cast<int>(vortices.size());
    for (const auto& v : vortices) row.total_winding += v.winding;
    row.energy = best->energy.total;
    row.residual_norm = best->residual_norm;
    row.best_seed = best->seed;
    row.converged = best->converged;
    out.rows.push_back(row);
  }
  for (const auto& row : out.rows) {
    if (row.anisotropy > 1e-2 && (!out.onset || row.g < *out.onset)) out.onset = row.g;
  }
  return out;
}

}  // namespace coldgas::gp
