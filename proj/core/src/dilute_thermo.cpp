#include "coldgas/dilute_thermo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coldgas/errors.hpp"
#include "coldgas/ideal_gas.hpp"

namespace coldgas::dilute {

namespace {

constexpr double kPi = std::numbers::pi;

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError("dilute_thermo", std::string(what) + " must be finite and >= 0");
  }
}

}  // namespace

std::string to_string(Regime r) {
  switch (r) {
    case Regime::ground_state: return "ground_state";
    case Regime::quantum: return "quantum";
    case Regime::classical: return "classical";
  }
  return "unknown";
}

Regime DiluteParams::regime() const {
  if (T == 0.0) return Regime::ground_state;
  if (rho == 0.0) return Regime::classical;
  const double ratio = T / std::pow(rho, 2.0 / 3.0);
  const double critical_ratio = 4.0 * kPi / std::pow(ideal_gas::zeta_3_2(), 2.0 / 3.0);
  return ratio > 10.0 * critical_ratio ? Regime::classical : Regime::quantum;
}

double ground_energy_density(double a, double rho) {
  require_nonneg(a, "a");
  require_nonneg(rho, "rho");
  return 4.0 * kPi * a * rho * rho;
}

double lhy_relative_correction(double a, double rho) {
  require_nonneg(a, "a");
  require_nonneg(rho, "rho");
  return 128.0 / (15.0 * std::sqrt(kPi)) * std::sqrt(a * a * a * rho);
}

double lhy_energy_density(double a, double rho) {
  return ground_energy_density(a, rho) * (1.0 + lhy_relative_correction(a, rho));
}

double condensate_density(double rho, double T) {
  require_nonneg(rho, "rho");
  require_nonneg(T, "T");
  if (T == 0.0) return rho;
  return std::max(rho - ideal_gas::critical_density(T), 0.0);
}

double interaction_correction(double a, double rho, double T) {
  require_nonneg(a, "a");
  const double n0 = condensate_density(rho, T);
  return 4.0 * kPi * a * (2.0 * rho * rho - n0 * n0);
}

double free_energy_dilute(double a, double rho, double T) {
  const double correction = interaction_correction(a, rho, T);
  const double f0 = T == 0.0 ? 0.0 : ideal_gas::free_energy_ideal(rho, T);
  return f0 + correction;
}

double tc_upper_bound(double rho, double a, double c) {
  require_nonneg(a, "a");
  if (!(c > 0.0)) throw DomainError("dilute_thermo", "c must be > 0");
  return ideal_gas::critical_temperature(rho) * (1.0 + c * std::sqrt(a * std::cbrt(rho)));
}

std::vector<TcBoundRow> tc_bound_curve(const std::vector<double>& x_grid, double c, double slope) {
  if (!(c > 0.0)) throw DomainError("dilute_thermo", "c must be > 0");
  std::vector<TcBoundRow> rows;
  rows.reserve(x_grid.size());
  for (double x : x_grid) {
    require_nonneg(x, "grid value");
    rows.push_back({x, c * std::sqrt(x), slope * x});
  }
  return rows;
}

}  // namespace coldgas::dilute
