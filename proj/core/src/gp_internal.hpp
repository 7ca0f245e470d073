#pragma once

#include <fftw3.h>

#include <vector>

#include "coldgas/gp.hpp"

namespace coldgas::gp::detail {

// Operators of one configuration. Owns an FFTW plan and scratch buffer, so an
// instance must stay on one thread.
class Grid {
 public:
  explicit Grid(const GPConfig& cfg);
  ~Grid();
  Grid(const Grid&) = delete;
  Grid& operator=(const Grid&) = delete;

  int n = 0;
  int dim = 2;
  double h = 0.0;
  double dv = 0.0;  // h^dim
  std::size_t size = 0;
  std::vector<double> coord;  // coordinate of index i along any axis
  std::vector<double> V;      // trap at each point

  void neg_laplacian(const Field& in, Field& out) const;
  void lz(const Field& in, Field& out) const;
  /// out = (-Lap + V - omega L_z) in
  void linear(const Field& in, Field& out, double omega) const;

  /// in <- (alpha - Lap)^{-1} in, diagonal in the sine basis.
  void precondition(Field& f, double alpha) const;
  double high_frequency_fraction(const Field& f) const;

  double dot_re(const Field& a, const Field& b) const;
  double norm_sq(const Field& a) const;

 private:
  void dst(const Field& in) const;  // result left in buf_
  std::vector<double> eig1d_;       // eigenvalues of -d^2/dx^2 on one axis
  fftw_plan plan_ = nullptr;
  double* buf_ = nullptr;
};

/// Rough radius of the cloud: max(oscillator length, Thomas-Fermi radius in
/// the rotating frame).
double cloud_radius(const GPConfig& cfg);

}  // namespace coldgas::gp::detail
