#pragma once

// Rotating Gross-Pitaevskii functional on a uniform Dirichlet grid:
//
//     E[phi] = <phi| -Lap + V - Omega L_z |phi> + 4 pi g \int |phi|^4,
//     V(x) = s |x|^2 + q |x|^4,   L_z = -i (x d_y - y d_x),
//
// with 2nd-order finite differences. In 2D the coupling 4 pi g is used as
// printed for 3D, so 2D results are a reduced model.
//
// Fields are stored row-major with x fastest: index = ix + n (iy + n iz),
// x_i = (i - (n - 1)/2) h, h = 2 B / (n + 1) (the box walls sit one spacing
// beyond the outermost nodes).

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "coldgas/errors.hpp"

namespace coldgas::gp {

using Field = std::vector<std::complex<double>>;

class GridTooCoarse : public Error {
 public:
  explicit GridTooCoarse(const std::string& m) : Error("gp_solver", "GridTooCoarse", m) {}
};

class Unstable : public Error {
 public:
  explicit Unstable(const std::string& m) : Error("gp_solver", "Unstable", m) {}
};

struct TrapSpec {
  double s = 0.25;  // quadratic coefficient
  double q = 0.0;   // quartic coefficient

  double operator()(double r2) const { return s * r2 + q * r2 * r2; }
  void validate() const;
};

struct GPConfig {
  TrapSpec trap;
  double g = 0.0;
  double omega = 0.0;
  int grid_n = 128;
  double box_half_width = 0.0;  // <= 0: default_box_half_width()
  int dim = 2;

  /// q > 0, or q = 0 and omega^2 < 4 s.
  bool stable() const;
  /// Throws DomainError on bad fields and Unstable when !stable().
  void validate() const;
  /// max(12 oscillator lengths, 4 Thomas-Fermi radii), lengths taken in the
  /// rotating frame (s replaced by s - omega^2/4).
  double default_box_half_width() const;
  double half_width() const;
  double spacing() const;
  double coordinate(int i) const;
  std::vector<double> coordinates() const;  // all n nodes, one spacing() call
  std::size_t points() const;
};

struct EnergyBreakdown {
  double kinetic = 0.0;
  double trap = 0.0;
  double rotation = 0.0;        // -Omega <L_z>
  double rotation_imag = 0.0;   // |Im <phi|L_z|phi>|, a hermiticity check
  double interaction = 0.0;     // 4 pi g \int |phi|^4
  double total = 0.0;
  double norm_sq = 0.0;         // \int |phi|^2
};

/// Energy of `phi` as given (no normalisation). With `check_resolution`,
/// throws GridTooCoarse if more than 1e-6 of the norm sits in the upper half
/// of the sine spectrum along any axis.
EnergyBreakdown gp_energy(const Field& phi, const GPConfig& cfg, bool check_resolution = true);

/// Share of \int |phi|^2 carried by sine modes with index >= n/2 on any axis.
double high_frequency_fraction(const Field& phi, const GPConfig& cfg);

struct Residual {
  Field r;      // (-Lap + V - Omega L_z + 8 pi g |phi|^2) phi - mu phi
  double mu = 0.0;
  double norm = 0.0;  // L2 norm on the grid
};

Residual gp_residual(const Field& phi, const GPConfig& cfg);

/// Real part of \int conj(a) b on the grid.
double inner(const Field& a, const Field& b, const GPConfig& cfg);
void normalize(Field& phi, const GPConfig& cfg);
/// Multiplies by a phase so the largest-magnitude value is real positive.
void fix_global_phase(Field& phi);

/// Samples f(x, y, z) (z = 0 in 2D) on the grid, normalised.
template <class F>
Field sample(const GPConfig& cfg, F&& f) {
  const int n = cfg.grid_n;
  Field phi(cfg.points());
  const auto x = cfg.coordinates();
  std::size_t k = 0;
  const int nz = cfg.dim == 3 ? n : 1;
  for (int iz = 0; iz < nz; ++iz) {
    const double z = cfg.dim == 3 ? x[iz] : 0.0;
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) phi[k++] = f(x[ix], x[iy], z);
    }
  }
  normalize(phi, cfg);
  return phi;
}

struct SolverOptions {
  double tol = 1e-8;  // residual norm
  int max_iter = 20000;
  int restarts = 5;
};

struct GPState {
  GPConfig config;
  Field phi;
  EnergyBreakdown energy;
  double mu = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  int restart = 0;                    // which restart produced this state
  std::vector<double> energy_history;  // one entry per iteration, starting field first
};

/// Raised by minimize_gp when no restart reaches the tolerance; carries the
/// lowest-energy state found.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& m, GPState best)
      : Error("gp_solver", "NotConverged", m), best_(std::make_shared<GPState>(std::move(best))) {}
  const GPState& best() const { return *best_; }

 private:
  std::shared_ptr<const GPState> best_;
};

/// Preconditioned nonlinear conjugate gradient on the unit sphere, started
/// from smooth complex Gaussian random fields; returns the lowest-energy
/// converged restart. Deterministic in (cfg, seed, opts).
GPState minimize_gp(const GPConfig& cfg, std::uint64_t seed, SolverOptions opts = {});

/// Same iteration from a given starting field (normalised internally).
GPState minimize_gp_from(const GPConfig& cfg, Field start, SolverOptions opts = {});

struct Vortex {
  double x = 0.0;  // plaquette centre
  double y = 0.0;
  int winding = 0;
};

/// Plaquettes with nonzero phase winding whose surroundings (within
/// `min_core_distance`) reach `density_fraction` of the peak density;
/// plaquettes closer than `min_core_distance` are merged. 2D only.
/// min_core_distance <= 0 selects max(3 h, min(half the trap length, healing
/// length 1/sqrt(8 pi g rho_max))).
std::vector<Vortex> detect_vortices(const Field& phi, const GPConfig& cfg,
                                    double min_core_distance = 0.0,
                                    double density_fraction = 0.05);

/// Relative L2 deviation of |phi|^2 from its average over grid points with
/// exactly equal |x|^2. 2D only.
double anisotropy(const Field& phi, const GPConfig& cfg);

struct ScanRow {
  double g = 0.0;
  double anisotropy = 0.0;
  int vortex_count = 0;
  int total_winding = 0;
  double energy = 0.0;
  double residual_norm = 0.0;
  std::uint64_t best_seed = 0;
  bool converged = false;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::optional<double> onset;  // smallest g with anisotropy > 1e-2
};

/// Best-of-seeds minimisers along g_grid (one restart per seed). `base`
/// supplies grid, box, dim and omega; trap.q must be > 0. Runs on up to
/// `jobs` threads; the table does not depend on `jobs`.
ScanResult symmetry_breaking_scan(const GPConfig& base, const std::vector<double>& g_grid,
                                  const std::vector<std::uint64_t>& seeds, SolverOptions opts = {},
                                  int jobs = 1);

}  // namespace coldgas::gp
