#pragma once

// Leading dilute-gas corrections to the ideal Bose gas (hbar = 2m = k_B = 1).
// Every function returns the bare closed form; none models the o(rho^2)
// remainder. Use describe() to get the diluteness a^3 rho and a regime label
// before trusting a number.

#include <string>
#include <vector>

namespace coldgas::dilute {

enum class Regime { ground_state, quantum, classical };

std::string to_string(Regime r);

struct DiluteParams {
  double a = 0.0;
  double rho = 0.0;
  double T = 0.0;
  double c = 1.0;  // Tc upper-bound constant; not fixed by theory

  double diluteness() const { return a * a * a * rho; }
  /// Outside the dilute regime (a^3 rho > 1e-2) results are still returned.
  bool dilute() const { return diluteness() <= 1e-2; }
  /// T / rho^{2/3}: 0 is the ground state, above ten times the ideal-gas
  /// critical ratio the gas is labelled classical.
  Regime regime() const;
};

/// e(rho) = 4 pi a rho^2.
double ground_energy_density(double a, double rho);

/// (128 / 15 sqrt(pi)) sqrt(a^3 rho).
double lhy_relative_correction(double a, double rho);

/// 4 pi a rho^2 (1 + lhy_relative_correction(a, rho)).
double lhy_energy_density(double a, double rho);

/// [rho - rho_c(T)]_+, with rho_c(0) = 0.
double condensate_density(double rho, double T);

/// f - f0 = 4 pi a (2 rho^2 - [rho - rho_c(T)]_+^2).
double interaction_correction(double a, double rho, double T);

/// f = f0(rho, T) + interaction_correction(a, rho, T). At T = 0 the ideal
/// part vanishes and f reduces to 4 pi a rho^2.
double free_energy_dilute(double a, double rho, double T);

/// T_c^(0)(rho) (1 + c sqrt(a rho^{1/3})).
double tc_upper_bound(double rho, double a, double c);

struct TcBoundRow {
  double x = 0.0;                 // a rho^{1/3}
  double sqrt_bound = 0.0;        // c sqrt(x): relative shift allowed by the bound
  double linear_reference = 0.0;  // slope * x
};

/// Rows behind the critical-temperature bound figure. `slope` is the
/// coefficient of the linear reference line (1.3 is the common numerical
/// estimate; it is not a derived constant).
std::vector<TcBoundRow> tc_bound_curve(const std::vector<double>& x_grid, double c,
                                       double slope = 1.3);

}  // namespace coldgas::dilute
