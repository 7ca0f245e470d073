#pragma once

// Thermodynamics of the homogeneous non-interacting Bose gas in the
// thermodynamic limit. Units: hbar = 2m = k_B = 1, so the kinetic energy of a
// particle of momentum p is p^2 and the thermal density scale is (T/4pi)^{3/2}.

#include <cstddef>
#include <string_view>

#include "coldgas/errors.hpp"

namespace coldgas::ideal_gas {

class TailNotConverged : public Error {
 public:
  explicit TailNotConverged(const std::string& m)
      : Error("ideal_gas", "TailNotConverged", m) {}
};

/// Bose function g_s(z) = sum_{k>=1} z^k / k^s for 0 <= z <= 1 and s > 1
/// (s = 3/2 and 5/2 are the cases used here; both are tabulated).
/// Direct series for z <= 1/2; expansion in ln z around z = 1 otherwise.
/// Throws DomainError for z outside [0, 1] or s <= 1.
double polylog(double s, double z);

/// zeta(3/2) and zeta(5/2).
double zeta_3_2();
double zeta_5_2();

/// (T / 4 pi)^{3/2}.
double thermal_density(double T);

/// rho = (T/4pi)^{3/2} g_{3/2}(e^{mu/T}); mu <= 0. mu = -inf gives 0.
double density_from_mu(double mu, double T);

/// Maximiser of the Legendre transform: 0 when rho >= rho_c(T), otherwise
/// the root of density_from_mu(mu, T) = rho found by bisection to 1e-12
/// relative. rho = 0 returns -infinity.
double effective_mu(double rho, double T);

/// f0 = mu_bar rho - T (T/4pi)^{3/2} g_{5/2}(e^{mu_bar/T}).
double free_energy_ideal(double rho, double T);

/// rho_c(T) = zeta(3/2) (T/4pi)^{3/2}.
double critical_density(double T);

/// T_c(rho) = 4pi rho^{2/3} / zeta(3/2)^{2/3}.
double critical_temperature(double rho);

struct ThermoPoint {
  double rho = 0.0;
  double T = 0.0;
  double mu_bar = 0.0;
  double f0 = 0.0;
  double rho_c = 0.0;
  double condensate = 0.0;
};

ThermoPoint thermo_point(double rho, double T);

enum class DecayClass { long_range_order, exponential, algebraic };

std::string_view to_string(DecayClass c);

/// long_range_order if rho > rho_c, algebraic if |rho - rho_c| <= rtol rho_c,
/// exponential otherwise.
DecayClass obdm_decay_class(double rho, double T, double rtol = 1e-12);

struct KernelOptions {
  /// Number of explicitly summed images; 0 picks max(2000, 10 T r^2 / 4).
  std::size_t n_max = 0;
  /// Absolute accuracy target for the truncated tail.
  double tolerance = 1e-10;
};

struct KernelValue {
  double value = 0.0;
  std::size_t n_terms = 0;
  double tail = 0.0;        // tail contribution added after n_terms (0 if bounded away)
  double tail_error = 0.0;  // bound / estimate of what remains
  bool integral_tail = false;
};

/// gamma(x, y) for |x - y| = r:
///   [rho - rho_c]_+ + sum_{n >= 1} e^{mu_bar n / T} (4 pi n / T)^{-3/2} e^{-T r^2 / 4n}.
/// The geometric bound on the tail is used when it is already below the
/// tolerance; otherwise (mu_bar at or near 0) the tail is estimated by the
/// Euler-Maclaurin integral. Throws TailNotConverged when even that estimate
/// cannot meet the tolerance at n_max.
KernelValue obdm_kernel_detail(double rho, double T, double r, KernelOptions opts = {});

inline double obdm_kernel(double rho, double T, double r, KernelOptions opts = {}) {
  return obdm_kernel_detail(rho, T, r, opts).value;
}

}  // namespace coldgas::ideal_gas
