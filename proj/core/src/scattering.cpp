#include "coldgas/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace coldgas::scattering {

namespace {

// v restricted to one integration segment is always affine in r.
struct Piece {
  double r0 = 0.0;
  double v0 = 0.0;
  double slope = 0.0;
  double operator()(double r) const { return v0 + slope * (r - r0); }
};

struct PieceAt {
  double hard_core;
  double cutoff;
  double mid;

  Piece operator()(const NoTail&) const { return {}; }

  Piece operator()(const SoftSphere& s) const {
    if (mid >= cutoff || mid >= s.radius) return {};
    return {0.0, s.height, 0.0};
  }

  Piece operator()(const Tabulated& t) const {
    const auto& smp = t.samples;
    if (mid >= cutoff || smp.empty()) return {};
    if (mid <= smp.front().first) return {0.0, smp.front().second, 0.0};
    if (mid >= smp.back().first) return {0.0, smp.back().second, 0.0};
    auto hi = std::upper_bound(smp.begin(), smp.end(), mid,
                               [](double r, const auto& s) { return r < s.first; });
    auto lo = std::prev(hi);
    const double slope = (hi->second - lo->second) / (hi->first - lo->first);
    return {lo->first, lo->second, slope};
  }
};

struct RungeKuttaRun {
  std::vector<RadialSample> samples;
  double a = 0.0;
  double r_matched = 0.0;
};

void check_finite(const RadialPotential& pot) {
  const double hc = pot.hard_core_radius();
  if (const auto* s = std::get_if<SoftSphere>(&pot.tail())) {
    if (s->radius > hc && !std::isfinite(s->height)) {
      throw NonFiniteTail("soft-sphere height is not finite");
    }
  }
  if (const auto* t = std::get_if<Tabulated>(&pot.tail())) {
    const auto& smp = t->samples;
    // The last sample at or below the hard core still feeds interpolation.
    std::size_t first = 0;
    for (std::size_t i = 0; i < smp.size(); ++i) {
      if (smp[i].first <= hc) first = i;
    }
    for (std::size_t i = first; i < smp.size(); ++i) {
      if (smp[i].first >= pot.cutoff_radius() && i > first) break;
      if (!std::isfinite(smp[i].second)) {
        std::ostringstream os;
        os << "tabulated v(" << smp[i].first << ") is not finite";
        throw NonFiniteTail(os.str());
      }
    }
  }
}

std::vector<double> segment_nodes(const RadialPotential& pot, double r_max) {
  std::vector<double> nodes{pot.hard_core_radius()};
  for (double b : pot.breakpoints()) nodes.push_back(b);
  if (pot.cutoff_radius() > nodes.back()) nodes.push_back(pot.cutoff_radius());
  if (r_max > nodes.back()) nodes.push_back(r_max);
  return nodes;
}

RungeKuttaRun integrate(const RadialPotential& pot, double r_max, double step) {
  const auto nodes = segment_nodes(pot, r_max);
  RungeKuttaRun run;
  double u = 0.0;
  double du = 1.0;
  run.samples.push_back({nodes.front(), u});

  for (std::size_t s = 0; s + 1 < nodes.size(); ++s) {
    const double r0 = nodes[s];
    const double r1 = nodes[s + 1];
    const Piece v = std::visit(
        PieceAt{pot.hard_core_radius(), pot.cutoff_radius(), 0.5 * (r0 + r1)}, pot.tail());
    const auto n = static_cast<long>(std::max(1.0, std::ceil((r1 - r0) / step - 1e-9)));
    const double h = (r1 - r0) / static_cast<double>(n);
    // u'' = (1/2) v u as a first-order system (u, u').
    auto rhs = [&v](double r, double y) { return 0.5 * v(r) * y; };
    for (long k = 0; k < n; ++k) {
      const double r = r0 + static_cast<double>(k) * h;
      const double k1u = du;
      const double k1d = rhs(r, u);
      const double k2u = du + 0.5 * h * k1d;
      const double k2d = rhs(r + 0.5 * h, u + 0.5 * h * k1u);
      const double k3u = du + 0.5 * h * k2d;
      const double k3d = rhs(r + 0.5 * h, u + 0.5 * h * k2u);
      const double k4u = du + h * k3d;
      const double k4d = rhs(r + h, u + h * k3u);
      u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      du += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
      const double r_next = (k + 1 == n) ? r1 : r0 + static_cast<double>(k + 1) * h;
      run.samples.push_back({r_next, u});
    }
  }

  // Least-squares line u = alpha + beta r over the last 10% of [cutoff, r_max].
  const double window_lo = r_max - 0.1 * (r_max - pot.cutoff_radius());
  double sr = 0, su = 0, srr = 0, sru = 0, cnt = 0;
  for (const auto& p : run.samples) {
    if (p.r < window_lo) continue;
    sr += p.r;
    su += p.u;
    srr += p.r * p.r;
    sru += p.r * p.u;
    cnt += 1;
  }
  if (cnt < 2) {
    // Window holds a single node (coarse step); fall back to the final slope.
    run.a = r_max - u / du;
    run.r_matched = r_max;
    return run;
  }
  const double mean_r = sr / cnt;
  const double mean_u = su / cnt;
  const double beta = (sru - cnt * mean_r * mean_u) / (srr - cnt * mean_r * mean_r);
  const double alpha = mean_u - beta * mean_r;
  run.a = -alpha / beta;
  run.r_matched = mean_r;
  return run;
}

}  // namespace

RadialPotential::RadialPotential(double hard_core_radius, Tail tail, double cutoff_radius)
    : hard_core_(hard_core_radius), tail_(std::move(tail)), cutoff_(cutoff_radius) {
  if (!(hard_core_ >= 0.0) || !std::isfinite(hard_core_)) {
    throw InvalidPotential("hard_core_radius must be finite and >= 0");
  }
  if (!(cutoff_ >= hard_core_) || !std::isfinite(cutoff_)) {
    throw InvalidPotential("cutoff_radius must be finite and >= hard_core_radius");
  }
  if (const auto* s = std::get_if<SoftSphere>(&tail_)) {
    if (s->height < 0.0) throw InvalidPotential("soft-sphere height must be >= 0");
    if (!(s->radius >= 0.0)) throw InvalidPotential("soft-sphere radius must be >= 0");
  }
  if (const auto* t = std::get_if<Tabulated>(&tail_)) {
    for (std::size_t i = 0; i < t->samples.size(); ++i) {
      const auto [r, v] = t->samples[i];
      if (!(r >= 0.0)) throw InvalidPotential("tabulated r must be >= 0");
      if (v < 0.0) throw InvalidPotential("tabulated v must be >= 0");
      if (i > 0 && !(r > t->samples[i - 1].first)) {
        throw InvalidPotential("tabulated r must be strictly increasing");
      }
    }
  }
}

RadialPotential RadialPotential::free() { return {0.0, NoTail{}, 0.0}; }

RadialPotential RadialPotential::hard_sphere(double radius) {
  return {radius, NoTail{}, radius};
}

RadialPotential RadialPotential::soft_sphere(double height, double radius,
                                             double hard_core_radius) {
  return {hard_core_radius, SoftSphere{height, radius}, std::max(radius, hard_core_radius)};
}

double RadialPotential::operator()(double r) const {
  if (r < hard_core_) return std::numeric_limits<double>::infinity();
  if (r >= cutoff_) return 0.0;
  // Evaluate with the piece that owns r (right-continuous at breakpoints).
  return std::visit(PieceAt{hard_core_, cutoff_, r}, tail_)(r);
}

std::vector<double> RadialPotential::breakpoints() const {
  std::vector<double> out;
  auto keep = [&](double r) {
    if (r > hard_core_ && r < cutoff_) out.push_back(r);
  };
  if (const auto* s = std::get_if<SoftSphere>(&tail_)) keep(s->radius);
  if (const auto* t = std::get_if<Tabulated>(&tail_)) {
    for (const auto& [r, v] : t->samples) keep(r);
  }
  return out;
}

RadialPotential RadialPotential::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("scattering", "dilation factor must be > 0");
  const double inv2 = 1.0 / (lambda * lambda);
  struct Scale {
    double lambda, inv2;
    Tail operator()(const NoTail&) const { return NoTail{}; }
    Tail operator()(const SoftSphere& s) const {
      return SoftSphere{s.height * inv2, s.radius * lambda};
    }
    Tail operator()(const Tabulated& t) const {
      Tabulated out;
      out.samples.reserve(t.samples.size());
      for (const auto& [r, v] : t.samples) out.samples.emplace_back(r * lambda, v * inv2);
      return out;
    }
  };
  return {hard_core_ * lambda, std::visit(Scale{lambda, inv2}, tail_), cutoff_ * lambda};
}

ScatteringSolution solve_zero_energy(const RadialPotential& pot, SolveOptions opts) {
  const double cutoff = pot.cutoff_radius();
  const double r_max = opts.r_max.value_or(cutoff > 0.0 ? 4.0 * cutoff : 1.0);
  if (!(r_max > cutoff)) {
    std::ostringstream os;
    os << "r_max = " << r_max << " must exceed cutoff_radius = " << cutoff;
    throw RangeTooSmall(os.str());
  }
  double step = 0.0;
  if (opts.step) {
    step = *opts.step;
  } else {
    const double span = cutoff - pot.hard_core_radius();
    step = (span > 0.0 ? span : r_max - pot.hard_core_radius()) / 2000.0;
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw DomainError("scattering", "integration step must be > 0");
  }
  check_finite(pot);

  const RungeKuttaRun coarse = integrate(pot, r_max, step);
  RungeKuttaRun fine = integrate(pot, r_max, 0.5 * step);

  ScatteringSolution sol;
  sol.a = fine.a + (fine.a - coarse.a) / 15.0;
  sol.residual = std::abs(fine.a - coarse.a);
  sol.r_matched = fine.r_matched;
  sol.u_samples = std::move(fine.samples);
  return sol;
}

double born_bound(const RadialPotential& pot) {
  if (pot.hard_core_radius() > 0.0) return kInfiniteBound;
  auto nodes = segment_nodes(pot, pot.cutoff_radius());
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < nodes.size(); ++s) {
    const double r0 = nodes[s];
    const double r1 = nodes[s + 1];
    const Piece v = std::visit(PieceAt{0.0, pot.cutoff_radius(), 0.5 * (r0 + r1)}, pot.tail());
    // \int_{r0}^{r1} (c0 + c1 r) r^2 dr with v = c0 + c1 r.
    const double c1 = v.slope;
    const double c0 = v.v0 - v.slope * v.r0;
    total += c0 * (r1 * r1 * r1 - r0 * r0 * r0) / 3.0 +
             c1 * (r1 * r1 * r1 * r1 - r0 * r0 * r0 * r0) / 4.0;
  }
  return 0.5 * total;
}

RadialPotential rescale_potential(const RadialPotential& unit_pot, double a_target) {
  if (!(a_target > 0.0)) throw DomainError("scattering", "a_target must be > 0");
  const double a = solve_zero_energy(unit_pot).a;
  if (std::abs(a - 1.0) > 1e-6) {
    std::ostringstream os;
    os << "potential has scattering length " << a << ", expected 1";
    throw NotUnitScattering(os.str());
  }
  return unit_pot.dilated(a_target);
}

}  // namespace coldgas::scattering
