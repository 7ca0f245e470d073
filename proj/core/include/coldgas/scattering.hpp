#pragma once

// Zero-energy s-wave scattering for repulsive radial pair potentials.
//
// Units follow hbar = 2m = 1: the scattering length a of v is fixed by the
// zero-energy radial problem
//
//     -u''(r) + (1/2) v(r) u(r) = 0,    u = r * phi(r),
//
// with u vanishing at the hard-core radius and u(r) = c (r - a) once v has
// dropped to zero. External potential data must already be expressed in these
// units; nothing is converted.

#include <limits>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "coldgas/errors.hpp"

namespace coldgas::scattering {

class NonFiniteTail : public Error {
 public:
  explicit NonFiniteTail(const std::string& m) : Error("scattering", "NonFiniteTail", m) {}
};

class RangeTooSmall : public Error {
 public:
  explicit RangeTooSmall(const std::string& m) : Error("scattering", "RangeTooSmall", m) {}
};

class NotUnitScattering : public Error {
 public:
  explicit NotUnitScattering(const std::string& m)
      : Error("scattering", "NotUnitScattering", m) {}
};

class InvalidPotential : public Error {
 public:
  explicit InvalidPotential(const std::string& m)
      : Error("scattering", "InvalidPotential", m) {}
};

struct NoTail {};

/// Constant barrier of the given height on [hard_core_radius, radius).
struct SoftSphere {
  double height = 0.0;
  double radius = 0.0;
};

/// Piecewise-linear table. Below the first sample the first value is used,
/// above the last sample the last value is used up to the cutoff radius.
struct Tabulated {
  std::vector<std::pair<double, double>> samples;  // (r, v)
};

using Tail = std::variant<NoTail, SoftSphere, Tabulated>;

class RadialPotential {
 public:
  /// Throws InvalidPotential on negative heights/radii, unsorted tables or
  /// cutoff_radius < hard_core_radius. Non-finite table values are accepted
  /// here and rejected by solve_zero_energy().
  RadialPotential(double hard_core_radius, Tail tail, double cutoff_radius);

  static RadialPotential free();
  static RadialPotential hard_sphere(double radius);
  static RadialPotential soft_sphere(double height, double radius,
                                     double hard_core_radius = 0.0);

  double hard_core_radius() const noexcept { return hard_core_; }
  double cutoff_radius() const noexcept { return cutoff_; }
  const Tail& tail() const noexcept { return tail_; }

  /// v(r); +infinity inside the hard core, 0 at and beyond the cutoff.
  double operator()(double r) const;

  /// Points in (hard_core_radius, cutoff_radius) where v is not smooth.
  std::vector<double> breakpoints() const;

  /// v_lambda(r) = lambda^-2 v(r / lambda); scales the scattering length by
  /// lambda.
  RadialPotential dilated(double lambda) const;

 private:
  double hard_core_;
  Tail tail_;
  double cutoff_;
};

struct RadialSample {
  double r;
  double u;
};

struct ScatteringSolution {
  double a = 0.0;
  std::vector<RadialSample> u_samples;  // finer of the two Richardson runs
  double r_matched = 0.0;               // centre of the least-squares window
  double residual = 0.0;                // |a(step) - a(step/2)|
};

struct SolveOptions {
  std::optional<double> r_max;  // default 4 * cutoff_radius
  std::optional<double> step;   // default (cutoff - hard core) / 2000
};

/// Integrates the zero-energy equation with fixed-step RK4 (grid nodes
/// aligned with every breakpoint of v), reads a off a least-squares line over
/// the last 10% of [cutoff, r_max], and Richardson-extrapolates a over step
/// and step/2.
ScatteringSolution solve_zero_energy(const RadialPotential& pot, SolveOptions opts = {});

inline constexpr double kInfiniteBound = std::numeric_limits<double>::infinity();

/// a_B = (1/8 pi) \int v = (1/2) \int_0^inf v(r) r^2 dr. Infinite for hard cores.
double born_bound(const RadialPotential& pot);

/// Given w with scattering length 1, returns v(x) = a^-2 w(x / a), whose
/// scattering length is a_target. Throws NotUnitScattering when the computed
/// scattering length of w differs from 1 by more than 1e-6.
RadialPotential rescale_potential(const RadialPotential& unit_pot, double a_target);

}  // namespace coldgas::scattering
