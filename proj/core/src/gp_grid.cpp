#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>

#include "gp_internal.hpp"

namespace coldgas::gp {

namespace {

constexpr double kPi = std::numbers::pi;

// The FFTW planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Outer Thomas-Fermi radius for V_eff(r) = s_eff r^2 + q r^4 and the 2D/3D
// coupling 8 pi g; 0 when g = 0 or the profile is not confining.
double thomas_fermi_radius(double s_eff, double q, double g, int dim) {
  if (g <= 0.0) return 0.0;
  // radii where s r^2 + q r^4 = mu, as r^2; the inner one is 0 unless mu < 0
  auto roots_sq = [&](double mu) -> std::pair<double, double> {
    if (q == 0.0) return {0.0, mu / s_eff};
    const double disc = std::sqrt(std::max(s_eff * s_eff + 4.0 * q * mu, 0.0));
    return {std::max((-s_eff - disc) / (2.0 * q), 0.0), (-s_eff + disc) / (2.0 * q)};
  };
  // \int (mu - V_eff) dA over the annulus, as a polynomial in r
  auto mass = [&](double mu) {
    auto F = [&](double r2) {
      if (dim == 3) {
        const double r = std::sqrt(r2);
        return 4.0 * kPi * r * r2 * (mu / 3.0 - s_eff * r2 / 5.0 - q * r2 * r2 / 7.0);
      }
      return 2.0 * kPi * r2 * (mu / 2.0 - s_eff * r2 / 4.0 - q * r2 * r2 / 6.0);
    };
    const auto [in, out] = roots_sq(mu);
    return (F(out) - F(in)) / (8.0 * kPi * g);
  };
  const double vmin = s_eff >= 0.0 ? 0.0 : -s_eff * s_eff / (4.0 * q);
  double lo = vmin, hi = vmin + 1.0;
  while (mass(hi) < 1.0 && hi < 1e12) hi = vmin + 2.0 * (hi - vmin);
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) < 1.0 ? lo : hi) = mid;
  }
  return std::sqrt(roots_sq(hi).second);
}

}  // namespace

void TrapSpec::validate() const {
  if (!(s >= 0.0) || !(q >= 0.0) || !(s + q > 0.0) || !std::isfinite(s) || !std::isfinite(q)) {
    throw DomainError("gp_solver", "trap needs s >= 0, q >= 0 and s + q > 0");
  }
}

bool GPConfig::stable() const { return trap.q > 0.0 || omega * omega < 4.0 * trap.s; }

void GPConfig::validate() const {
  trap.validate();
  if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("gp_solver", "g must be finite and >= 0");
  if (!std::isfinite(omega)) throw DomainError("gp_solver", "omega must be finite");
  if (dim != 2 && dim != 3) throw DomainError("gp_solver", "dim must be 2 or 3");
  if (grid_n < 8) throw DomainError("gp_solver", "grid_n must be >= 8");
  if (!std::isfinite(box_half_width)) throw DomainError("gp_solver", "box_half_width must be finite");
  if (!stable()) {
    std::ostringstream os;
    os << "V - |Omega x|^2/4 is not confining (s=" << trap.s << ", q=" << trap.q
       << ", omega=" << omega << "): need q > 0 or omega^2 < 4s";
    throw Unstable(os.str());
  }
}

namespace {

double oscillator_length(const TrapSpec& trap) {
  double ell = std::numeric_limits<double>::infinity();
  if (trap.s > 0.0) ell = std::pow(trap.s, -0.25);
  if (trap.q > 0.0) ell = std::min(ell, std::pow(trap.q, -1.0 / 6.0));
  return ell;
}

double rotating_tf_radius(const GPConfig& cfg) {
  return thomas_fermi_radius(cfg.trap.s - 0.25 * cfg.omega * cfg.omega, cfg.trap.q, cfg.g, cfg.dim);
}

}  // namespace

double GPConfig::default_box_half_width() const {
  return std::max(12.0 * oscillator_length(trap), 4.0 * rotating_tf_radius(*this));
}

double GPConfig::half_width() const {
  return box_half_width > 0.0 ? box_half_width : default_box_half_width();
}

double GPConfig::spacing() const { return 2.0 * half_width() / (grid_n + 1); }

double GPConfig::coordinate(int i) const { return (i - 0.5 * (grid_n - 1)) * spacing(); }

std::vector<double> GPConfig::coordinates() const {
  const double h = spacing();
  std::vector<double> x(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) x[i] = (i - 0.5 * (grid_n - 1)) * h;
  return x;
}

std::size_t GPConfig::points() const {
  std::size_t p = 1;
  for (int d = 0; d < dim; ++d) p *= static_cast<std::size_t>(grid_n);
  return p;
}

namespace detail {

double cloud_radius(const GPConfig& cfg) {
  return std::max(oscillator_length(cfg.trap), rotating_tf_radius(cfg));
}

Grid::Grid(const GPConfig& cfg) : n(cfg.grid_n), dim(cfg.dim), h(cfg.spacing()) {
  size = cfg.points();
  dv = std::pow(h, dim);
  coord = cfg.coordinates();
  V.resize(size);
  const int nz = dim == 3 ? n : 1;
  std::size_t k = 0;
  for (int iz = 0; iz < nz; ++iz) {
    const double z = dim == 3 ? coord[iz] : 0.0;
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const double r2 = coord[ix] * coord[ix] + coord[iy] * coord[iy] + z * z;
        V[k++] = cfg.trap(r2);
      }
    }
  }
  eig1d_.resize(static_cast<std::size_t>(n));
  for (int k1 = 0; k1 < n; ++k1) {
    const double sn = std::sin(kPi * (k1 + 1) / (2.0 * (n + 1)));
    eig1d_[k1] = 4.0 * sn * sn / (h * h);
  }

  std::lock_guard<std::mutex> lock(planner_mutex());
  buf_ = static_cast<double*>(fftw_malloc(sizeof(double) * 2 * size));
  int dims[3] = {n, n, n};
  fftw_r2r_kind kinds[3] = {FFTW_RODFT00, FFTW_RODFT00, FFTW_RODFT00};
  plan_ = fftw_plan_many_r2r(dim, dims, 2, buf_, nullptr, 2, 1, buf_, nullptr, 2, 1, kinds,
                             FFTW_ESTIMATE);
}

Grid::~Grid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_) fftw_destroy_plan(plan_);
  if (buf_) fftw_free(buf_);
}

void Grid::neg_laplacian(const Field& in, Field& out) const {
  out.resize(size);
  const double c = 1.0 / (h * h);
  const std::size_t sy = static_cast<std::size_t>(n);
  const std::size_t sz = sy * sy;
  const int nz = dim == 3 ? n : 1;
  std::size_t k = 0;
  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix, ++k) {
        std::complex<double> acc = 2.0 * dim * in[k];
        if (ix > 0) acc -= in[k - 1];
        if (ix + 1 < n) acc -= in[k + 1];
        if (iy > 0) acc -= in[k - sy];
        if (iy + 1 < n) acc -= in[k + sy];
        if (dim == 3) {
          if (iz > 0) acc -= in[k - sz];
          if (iz + 1 < n) acc -= in[k + sz];
        }
        out[k] = c * acc;
      }
    }
  }
}

void Grid::lz(const Field& in, Field& out) const {
  out.resize(size);
  const double c = 1.0 / (2.0 * h);
  const std::size_t sy = static_cast<std::size_t>(n);
  const int nz = dim == 3 ? n : 1;
  const std::complex<double> minus_i(0.0, -1.0);
  std::size_t k = 0;
  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix, ++k) {
        const std::complex<double> xp = ix + 1 < n ? in[k + 1] : 0.0;
        const std::complex<double> xm = ix > 0 ? in[k - 1] : 0.0;
        const std::complex<double> yp = iy + 1 < n ? in[k + sy] : 0.0;
        const std::complex<double> ym = iy > 0 ? in[k - sy] : 0.0;
        const std::complex<double> dx = c * (xp - xm);
        const std::complex<double> dy = c * (yp - ym);
        out[k] = minus_i * (coord[ix] * dy - coord[iy] * dx);
      }
    }
  }
}

void Grid::linear(const Field& in, Field& out, double omega) const {
  neg_laplacian(in, out);
  for (std::size_t k = 0; k < size; ++k) out[k] += V[k] * in[k];
  if (omega != 0.0) {
    Field l;
    lz(in, l);
    for (std::size_t k = 0; k < size; ++k) out[k] -= omega * l[k];
  }
}

void Grid::dst(const Field& in) const {
  const double* src = reinterpret_cast<const double*>(in.data());
  std::copy(src, src + 2 * size, buf_);
  fftw_execute(plan_);
}

void Grid::precondition(Field& f, double alpha) const {
  dst(f);
  double scale = 1.0;
  for (int d = 0; d < dim; ++d) scale /= 2.0 * (n + 1);
  const int nz = dim == 3 ? n : 1;
  std::size_t k = 0;
  for (int iz = 0; iz < nz; ++iz) {
    const double ez = dim == 3 ? eig1d_[iz] : 0.0;
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix, ++k) {
        const double w = scale / (alpha + eig1d_[ix] + eig1d_[iy] + ez);
        buf_[2 * k] *= w;
        buf_[2 * k + 1] *= w;
      }
    }
  }
  fftw_execute(plan_);
  auto* dst_ptr = reinterpret_cast<double*>(f.data());
  std::copy(buf_, buf_ + 2 * size, dst_ptr);
}

double Grid::high_frequency_fraction(const Field& f) const {
  dst(f);
  const int half = n / 2;
  const int nz = dim == 3 ? n : 1;
  long double total = 0.0L, high = 0.0L;
  std::size_t k = 0;
  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix, ++k) {
        const long double p = static_cast<long double>(buf_[2 * k]) * buf_[2 * k] +
                              static_cast<long double>(buf_[2 * k + 1]) * buf_[2 * k + 1];
        total += p;
        if (ix >= half || iy >= half || (dim == 3 && iz >= half)) high += p;
      }
    }
  }
  return total > 0.0L ? static_cast<double>(high / total) : 0.0;
}

double Grid::dot_re(const Field& a, const Field& b) const {
  long double acc = 0.0L;
  for (std::size_t k = 0; k < size; ++k) {
    acc += static_cast<long double>(a[k].real()) * b[k].real() +
           static_cast<long double>(a[k].imag()) * b[k].imag();
  }
  return static_cast<double>(acc * dv);
}

double Grid::norm_sq(const Field& a) const { return dot_re(a, a); }

}  // namespace detail

namespace {

void check_field(const Field& phi, const GPConfig& cfg) {
  cfg.validate();
  if (phi.size() != cfg.points()) throw DomainError("gp_solver", "field size does not match grid");
}

}  // namespace

double high_frequency_fraction(const Field& phi, const GPConfig& cfg) {
  check_field(phi, cfg);
  detail::Grid grid(cfg);
  return grid.high_frequency_fraction(phi);
}

EnergyBreakdown gp_energy(const Field& phi, const GPConfig& cfg, bool check_resolution) {
  check_field(phi, cfg);
  detail::Grid grid(cfg);
  if (check_resolution) {
    const double hf = grid.high_frequency_fraction(phi);
    if (hf > 1e-6) {
      std::ostringstream os;
      os << "high-frequency share of the norm is " << hf << " (> 1e-6); refine the grid";
      throw GridTooCoarse(os.str());
    }
  }
  Field tmp;
  EnergyBreakdown e;
  grid.neg_laplacian(phi, tmp);
  e.kinetic = grid.dot_re(phi, tmp);
  long double trap = 0.0L, quartic = 0.0L;
  for (std::size_t k = 0; k < grid.size; ++k) {
    const double p = std::norm(phi[k]);
    trap += static_cast<long double>(grid.V[k]) * p;
    quartic += static_cast<long double>(p) * p;
  }
  e.trap = static_cast<double>(trap * grid.dv);
  e.interaction = 4.0 * kPi * cfg.g * static_cast<double>(quartic * grid.dv);
  grid.lz(phi, tmp);
  long double re = 0.0L, im = 0.0L;
  for (std::size_t k = 0; k < grid.size; ++k) {
    const auto v = std::conj(phi[k]) * tmp[k];
    re += v.real();
    im += v.imag();
  }
  e.rotation = -cfg.omega * static_cast<double>(re * grid.dv);
  e.rotation_imag = std::abs(static_cast<double>(im * grid.dv));
  e.total = e.kinetic + e.trap + e.rotation + e.interaction;
  e.norm_sq = grid.norm_sq(phi);
  return e;
}

Residual gp_residual(const Field& phi, const GPConfig& cfg) {
  check_field(phi, cfg);
  detail::Grid grid(cfg);
  Residual res;
  grid.linear(phi, res.r, cfg.omega);
  const double c = 8.0 * kPi * cfg.g;
  for (std::size_t k = 0; k < grid.size; ++k) res.r[k] += c * std::norm(phi[k]) * phi[k];
  res.mu = grid.dot_re(phi, res.r) / grid.norm_sq(phi);
  for (std::size_t k = 0; k < grid.size; ++k) res.r[k] -= res.mu * phi[k];
  res.norm = std::sqrt(grid.norm_sq(res.r));
  return res;
}

double inner(const Field& a, const Field& b, const GPConfig& cfg) {
  if (a.size() != cfg.points() || b.size() != cfg.points()) {
    throw DomainError("gp_solver", "field size does not match grid");
  }
  long double acc = 0.0L;
  for (std::size_t k = 0; k < a.size(); ++k) acc += (std::conj(a[k]) * b[k]).real();
  return static_cast<double>(acc * std::pow(cfg.spacing(), cfg.dim));
}

void normalize(Field& phi, const GPConfig& cfg) {
  const double nn = inner(phi, phi, cfg);
  if (!(nn > 0.0)) throw DomainError("gp_solver", "cannot normalise a zero field");
  const double s = 1.0 / std::sqrt(nn);
  for (auto& v : phi) v *= s;
}

void fix_global_phase(Field& phi) {
  if (phi.empty()) return;
  std::size_t imax = 0;
  for (std::size_t k = 1; k < phi.size(); ++k) {
    if (std::norm(phi[k]) > std::norm(phi[imax])) imax = k;
  }
  const double a = std::abs(phi[imax]);
  if (a == 0.0) return;
  const auto rot = std::conj(phi[imax]) / a;
  for (auto& v : phi) v *= rot;
}

}  // namespace coldgas::gp
