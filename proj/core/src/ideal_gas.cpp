#include "coldgas/ideal_gas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

namespace coldgas::ideal_gas {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_T(double T) {
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw DomainError("ideal_gas", "temperature must be finite and > 0");
  }
}

void require_density(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw DomainError("ideal_gas", "density must be finite and >= 0");
  }
}

}  // namespace

double thermal_density(double T) { return std::pow(T / (4.0 * kPi), 1.5); }

double critical_density(double T) {
  require_positive_T(T);
  return zeta_3_2() * thermal_density(T);
}

double critical_temperature(double rho) {
  if (!(rho > 0.0)) throw DomainError("ideal_gas", "density must be > 0");
  return 4.0 * kPi * std::pow(rho, 2.0 / 3.0) / std::pow(zeta_3_2(), 2.0 / 3.0);
}

double density_from_mu(double mu, double T) {
  require_positive_T(T);
  if (mu > 0.0 || std::isnan(mu)) {
    throw DomainError("ideal_gas", "chemical potential must be <= 0");
  }
  if (std::isinf(mu)) return 0.0;
  return thermal_density(T) * polylog(1.5, std::exp(mu / T));
}

double effective_mu(double rho, double T) {
  require_density(rho);
  require_positive_T(T);
  if (rho == 0.0) return -std::numeric_limits<double>::infinity();
  if (rho >= critical_density(T)) return 0.0;

  double lo = -T * 1e3 * (1.0 + std::abs(std::log(rho)));
  while (density_from_mu(lo, T) > rho) lo *= 2.0;
  double hi = 0.0;
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (density_from_mu(mid, T) < rho) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-13 * std::abs(hi)) break;
  }
  return 0.5 * (lo + hi);
}

double free_energy_ideal(double rho, double T) {
  require_density(rho);
  require_positive_T(T);
  const double mu = effective_mu(rho, T);
  const double pressure_term = T * thermal_density(T);
  if (std::isinf(mu)) return 0.0;
  return mu * rho - pressure_term * polylog(2.5, std::exp(mu / T));
}

ThermoPoint thermo_point(double rho, double T) {
  ThermoPoint p;
  p.rho = rho;
  p.T = T;
  p.mu_bar = effective_mu(rho, T);
  p.f0 = free_energy_ideal(rho, T);
  p.rho_c = critical_density(T);
  p.condensate = std::max(rho - p.rho_c, 0.0);
  return p;
}

std::string_view to_string(DecayClass c) {
  switch (c) {
    case DecayClass::long_range_order: return "long_range_order";
    case DecayClass::exponential: return "exponential";
    case DecayClass::algebraic: return "algebraic";
  }
  return "unknown";
}

DecayClass obdm_decay_class(double rho, double T, double rtol) {
  require_density(rho);
  const double rho_c = critical_density(T);
  if (std::abs(rho - rho_c) <= rtol * rho_c) return DecayClass::algebraic;
  return rho > rho_c ? DecayClass::long_range_order : DecayClass::exponential;
}

KernelValue obdm_kernel_detail(double rho, double T, double r, KernelOptions opts) {
  require_density(rho);
  require_positive_T(T);
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw DomainError("ideal_gas", "separation must be finite and >= 0");
  }
  KernelValue out;
  const double rho_c = critical_density(T);
  const double condensate = std::max(rho - rho_c, 0.0);
  if (rho == 0.0) return out;

  const double mu = effective_mu(rho, T);
  const double beta_mu = mu / T;  // ln z <= 0
  const double c = 0.25 * T * r * r;
  const double amp = thermal_density(T);

  auto term = [&](double n) { return amp * std::exp(beta_mu * n - c / n) / (n * std::sqrt(n)); };
  auto dterm = [&](double n) { return term(n) * (beta_mu - 1.5 / n + c / (n * n)); };

  std::size_t n_max = opts.n_max;
  if (n_max == 0) n_max = std::max<std::size_t>(2000, static_cast<std::size_t>(std::ceil(10.0 * c)));

  double sum = 0.0;
  for (std::size_t n = n_max; n >= 1; --n) sum += term(static_cast<double>(n));  // small first
  out.n_terms = n_max;

  const double N = static_cast<double>(n_max);
  if (beta_mu < 0.0) {
    const double z = std::exp(beta_mu);
    const double bound = amp * std::exp(beta_mu * (N + 1.0)) / ((N + 1.0) * std::sqrt(N + 1.0)) /
                         (1.0 - z);
    if (bound <= opts.tolerance) {
      out.value = condensate + sum;
      out.tail_error = bound;
      return out;
    }
  }

  // Euler-Maclaurin: sum_{n>N} f(n) = \int_N^inf f - f(N)/2 - f'(N)/12 + f'''(N)/720 - ...
  double integral = 0.0;
  if (beta_mu == 0.0) {
    integral = c > 0.0 ? amp * std::sqrt(kPi / c) * std::erf(std::sqrt(c / N))
                       : amp * 2.0 / std::sqrt(N);
  } else {
    boost::math::quadrature::exp_sinh<double> quad;
    integral = quad.integrate([&](double x) { return term(N + x); }, 0.0,
                              std::numeric_limits<double>::infinity());
  }
  const double d3 = dterm(N + 1.0) - 2.0 * dterm(N) + dterm(N - 1.0);
  out.tail = integral - 0.5 * term(N) - dterm(N) / 12.0 + d3 / 720.0;
  out.tail_error = std::abs(d3) / 720.0;
  out.integral_tail = true;
  if (out.tail_error > opts.tolerance) {
    throw TailNotConverged("kernel tail estimate exceeds tolerance; raise n_max");
  }
  out.value = condensate + sum + out.tail;
  return out;
}

}  // namespace coldgas::ideal_gas
