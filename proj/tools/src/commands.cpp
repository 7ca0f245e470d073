#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "coldgas/dilute_thermo.hpp"
#include "coldgas/gp.hpp"
#include "coldgas/ideal_gas.hpp"
#include "coldgas/lll.hpp"
#include "coldgas/scattering.hpp"

namespace coldgas::cli {

namespace {

void require(bool ok, const std::string& flag, const std::string& message) {
  if (!ok) throw ValidationFailed({flag}, flag + ": " + message);
}

void require_finite(double v, const std::string& flag) {
  require(std::isfinite(v), flag, "must be finite");
}

// Evaluates fn(0..n-1) on up to `jobs` threads; results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t n, int jobs, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---- potential JSON ---------------------------------------------------------

double number_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ValidationFailed({"--potential"}, "--potential: " + where + " needs numeric '" + key + "'");
  }
  return j.at(key).get<double>();
}

scattering::RadialPotential potential_from_json(const json& j) {
  if (!j.is_object()) throw ValidationFailed({"--potential"}, "--potential: expected a JSON object");
  const double hc = j.contains("hard_core_radius") ? number_field(j, "hard_core_radius", "potential") : 0.0;
  scattering::Tail tail = scattering::NoTail{};
  std::string kind = "none";
  if (j.contains("tail")) {
    const json& t = j.at("tail");
    if (!t.is_object() || !t.contains("kind") || !t.at("kind").is_string()) {
      throw ValidationFailed({"--potential"}, "--potential: 'tail' needs a string 'kind'");
    }
    kind = t.at("kind").get<std::string>();
    if (kind == "soft_sphere") {
      tail = scattering::SoftSphere{number_field(t, "height", "soft_sphere tail"),
                                    number_field(t, "radius", "soft_sphere tail")};
    } else if (kind == "tabulated") {
      if (!t.contains("samples") || !t.at("samples").is_array()) {
        throw ValidationFailed({"--potential"}, "--potential: tabulated tail needs 'samples'");
      }
      scattering::Tabulated tab;
      for (const auto& s : t.at("samples")) {
        if (!s.is_array() || s.size() != 2 || !s[0].is_number() ||
            !(s[1].is_number() || s[1].is_null() || s[1].is_string())) {
          throw ValidationFailed({"--potential"}, "--potential: samples are [r, v] pairs");
        }
        double v = 0.0;
        if (s[1].is_number()) {
          v = s[1].get<double>();
        } else if (s[1].is_string() && (s[1] == "inf" || s[1] == "Infinity")) {
          v = std::numeric_limits<double>::infinity();
        } else {
          v = std::numeric_limits<double>::quiet_NaN();
        }
        tab.samples.emplace_back(s[0].get<double>(), v);
      }
      tail = std::move(tab);
    } else if (kind != "none") {
      throw ValidationFailed({"--potential"}, "--potential: unknown tail kind '" + kind + "'");
    }
  }
  double cutoff = hc;
  if (j.contains("cutoff_radius")) {
    cutoff = number_field(j, "cutoff_radius", "potential");
  } else if (const auto* ss = std::get_if<scattering::SoftSphere>(&tail)) {
    cutoff = std::max(hc, ss->radius);
  } else if (kind == "tabulated") {
    throw ValidationFailed({"--potential"}, "--potential: tabulated potential needs 'cutoff_radius'");
  }
  return scattering::RadialPotential(hc, std::move(tail), cutoff);
}

// ---- LLL helpers --------------------------------------------------------------

std::vector<lll::YrastPoint> yrast_points(int N, int lmax, int jobs) {
  return parallel_map<lll::YrastPoint>(static_cast<std::size_t>(lmax) + 1, jobs,
                                       [N](std::size_t L) { return lll::yrast(N, static_cast<int>(L)); });
}

void validate_n(int n) {
  require(n >= 1 && n <= 64, "--n", "must be in [1, 64]");
}

const char* kDeltaUnits = "delta values are absolute and include the factor (2 pi)^(-3/2)";

}  // namespace

Result scatter(const ScatterArgs& a) {
  json pj;
  {
    std::ifstream in(a.potential, std::ios::binary);
    require(static_cast<bool>(in), "--potential", "cannot open '" + a.potential + "'");
    try {
      pj = json::parse(in);
    } catch (const json::exception& e) {
      throw ValidationFailed({"--potential"}, std::string("--potential: invalid JSON: ") + e.what());
    }
  }
  if (a.rmax) require(std::isfinite(*a.rmax) && *a.rmax > 0.0, "--rmax", "must be > 0");
  if (a.step) require(std::isfinite(*a.step) && *a.step > 0.0, "--step", "must be > 0");
  require(a.samples >= 2 && a.samples <= 100000, "--samples", "must be in [2, 1e5]");
  const auto pot = potential_from_json(pj);

  scattering::SolveOptions opts;
  opts.r_max = a.rmax;
  opts.step = a.step;
  const auto sol = scattering::solve_zero_energy(pot, opts);
  const double bound = scattering::born_bound(pot);

  Result r;
  r.units = "lengths in the units of the potential file; v enters as -u'' + v u / 2 = 0";
  r.payload["potential"] = pj;
  r.payload["a"] = sol.a;
  r.payload["r_matched"] = sol.r_matched;
  r.payload["residual"] = sol.residual;
  r.payload["born_bound"] = finite_or_null(bound);
  r.payload["born_bound_infinite"] = std::isinf(bound);
  json samples = json::array();
  const std::size_t m = sol.u_samples.size();
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(a.samples), m);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t idx = k == 1 ? 0 : i * (m - 1) / (k - 1);
    samples.push_back({sol.u_samples[idx].r, sol.u_samples[idx].u});
  }
  r.payload["u_samples"] = std::move(samples);
  return r;
}

Result ideal(const IdealArgs& a) {
  require_finite(a.rho, "--rho");
  require_finite(a.T, "--T");
  require(a.rho > 0.0, "--rho", "must be > 0");
  require(a.T > 0.0, "--T", "must be > 0");
  require(a.crit_rtol >= 0.0 && a.crit_rtol < 1.0, "--crit-rtol", "must be in [0, 1)");
  if (a.kernel_r) require(std::isfinite(*a.kernel_r) && *a.kernel_r >= 0.0, "--kernel-r", "must be >= 0");

  const auto p = ideal_gas::thermo_point(a.rho, a.T);
  Result r;
  r.units = "rho in length^-3, T and mu_bar in energy, f0 in energy / length^3";
  r.payload["rho"] = p.rho;
  r.payload["T"] = p.T;
  r.payload["mu_bar"] = p.mu_bar;
  r.payload["f0"] = p.f0;
  r.payload["rho_c"] = p.rho_c;
  r.payload["T_c"] = ideal_gas::critical_temperature(a.rho);
  r.payload["condensate"] = p.condensate;
  r.payload["decay_class"] = std::string(ideal_gas::to_string(ideal_gas::obdm_decay_class(a.rho, a.T, a.crit_rtol)));
  r.payload["crit_rtol"] = a.crit_rtol;
  if (a.kernel_r) {
    const auto k = ideal_gas::obdm_kernel_detail(a.rho, a.T, *a.kernel_r);
    r.payload["kernel_r"] = *a.kernel_r;
    r.payload["kernel"] = k.value;
    r.payload["kernel_terms"] = static_cast<long long>(k.n_terms);
    r.payload["kernel_tail_error"] = k.tail_error;
  }
  return r;
}

Result ideal_sweep(const IdealSweepArgs& a) {
  require_finite(a.T, "--T");
  require(a.T > 0.0, "--T", "must be > 0");
  require(a.crit_rtol >= 0.0 && a.crit_rtol < 1.0, "--crit-rtol", "must be in [0, 1)");
  const auto grid = parse_grid(a.rho_grid, "--rho-grid");
  for (double rho : grid) require(rho > 0.0, "--rho-grid", "densities must be > 0");

  using Row = std::vector<Cell>;
  const auto rows = parallel_map<Row>(grid.size(), a.jobs, [&](std::size_t i) {
    const auto p = ideal_gas::thermo_point(grid[i], a.T);
    return Row{p.rho, p.mu_bar, p.f0, p.condensate,
               std::string(ideal_gas::to_string(ideal_gas::obdm_decay_class(p.rho, a.T, a.crit_rtol)))};
  });
  Result r;
  r.units = "rho in length^-3, mu_bar in energy, f0 in energy / length^3";
  r.table.columns = {"rho", "mu_bar", "f0", "condensate", "decay_class"};
  r.table.rows = rows;
  r.payload["T"] = a.T;
  r.payload["rho_c"] = ideal_gas::critical_density(a.T);
  return r;
}

Result dilute(const DiluteArgs& a) {
  require_finite(a.a, "--a");
  require_finite(a.rho, "--rho");
  require_finite(a.T, "--T");
  require_finite(a.c, "--c");
  require(a.a >= 0.0, "--a", "must be >= 0");
  require(a.rho > 0.0, "--rho", "must be > 0");
  require(a.T >= 0.0, "--T", "must be >= 0");
  require(a.c >= 0.0, "--c", "must be >= 0");

  dilute::DiluteParams p{a.a, a.rho, a.T, a.c};
  Result r;
  r.units = "a in length, rho in length^-3, energies per volume in energy / length^3";
  r.payload["a"] = a.a;
  r.payload["rho"] = a.rho;
  r.payload["T"] = a.T;
  r.payload["c"] = a.c;
  r.payload["diluteness"] = p.diluteness();
  r.payload["dilute"] = p.dilute();
  r.payload["regime"] = dilute::to_string(p.regime());
  r.payload["e0"] = dilute::ground_energy_density(a.a, a.rho);
  r.payload["lhy_relative"] = dilute::lhy_relative_correction(a.a, a.rho);
  r.payload["lhy_energy_density"] = dilute::lhy_energy_density(a.a, a.rho);
  if (a.T > 0.0) {
    r.payload["f0"] = ideal_gas::free_energy_ideal(a.rho, a.T);
    r.payload["rho_c"] = ideal_gas::critical_density(a.T);
  } else {
    r.payload["f0"] = 0.0;
    r.payload["rho_c"] = 0.0;
  }
  r.payload["condensate"] = dilute::condensate_density(a.rho, a.T);
  r.payload["interaction_correction"] = dilute::interaction_correction(a.a, a.rho, a.T);
  r.payload["f"] = dilute::free_energy_dilute(a.a, a.rho, a.T);
  r.payload["T_c0"] = ideal_gas::critical_temperature(a.rho);
  r.payload["T_c_upper_bound"] = dilute::tc_upper_bound(a.rho, a.a, a.c);
  return r;
}

Result tc_bound(const TcBoundArgs& a) {
  require_finite(a.c, "--c");
  require_finite(a.slope, "--slope");
  require(a.c >= 0.0, "--c", "must be >= 0");
  const auto grid = parse_grid(a.grid, "--grid");
  for (double x : grid) require(x >= 0.0, "--grid", "x = a rho^(1/3) must be >= 0");
  Result r;
  r.units = "x = a rho^(1/3) dimensionless; columns are relative shifts of T_c";
  r.table.columns = {"x", "sqrt_bound", "linear_reference"};
  for (const auto& row : dilute::tc_bound_curve(grid, a.c, a.slope)) {
    r.table.rows.push_back({row.x, row.sqrt_bound, row.linear_reference});
  }
  r.payload["c"] = a.c;
  r.payload["slope"] = a.slope;
  return r;
}

namespace {

gp::GPConfig gp_config(int dim, double s, double q, double g, double omega, int grid, double box) {
  require(dim == 2 || dim == 3, "--dim", "must be 2 or 3");
  require_finite(s, "--s");
  require_finite(q, "--q");
  require_finite(g, "--g");
  require_finite(omega, "--omega");
  require_finite(box, "--box");
  require(s >= 0.0, "--s", "must be >= 0");
  require(q >= 0.0, "--q", "must be >= 0");
  require(s + q > 0.0, "--s", "s + q must be > 0");
  require(g >= 0.0, "--g", "must be >= 0");
  require(grid >= 8 && grid <= (dim == 2 ? 2048 : 256), "--grid", "out of range");
  require(box >= 0.0, "--box", "must be >= 0 (0 selects the default)");
  gp::GPConfig cfg;
  cfg.trap = {s, q};
  cfg.g = g;
  cfg.omega = omega;
  cfg.grid_n = grid;
  cfg.box_half_width = box;
  cfg.dim = dim;
  return cfg;
}

json gp_config_json(const gp::GPConfig& cfg) {
  json j;
  j["dim"] = cfg.dim;
  j["s"] = cfg.trap.s;
  j["q"] = cfg.trap.q;
  j["g"] = cfg.g;
  j["omega"] = cfg.omega;
  j["grid_n"] = cfg.grid_n;
  j["box_half_width"] = cfg.half_width();
  j["spacing"] = cfg.spacing();
  return j;
}

}  // namespace

Result gp(const GPArgs& a) {
  const auto cfg = gp_config(a.dim, a.s, a.q, a.g, a.omega, a.grid, a.box);
  require(a.tol > 0.0, "--tol", "must be > 0");
  require(a.max_iter >= 1, "--max-iter", "must be >= 1");
  require(a.restarts >= 1, "--restarts", "must be >= 1");
  gp::SolverOptions opts;
  opts.tol = a.tol;
  opts.max_iter = a.max_iter;
  opts.restarts = a.restarts;

  Result r;
  gp::GPState st;
  try {
    st = gp::minimize_gp(cfg, a.seed, opts);
  } catch (const gp::NotConverged& e) {
    st = e.best();
    r.warning_code = e.code();
    r.warning_message = e.what();
  }
  r.units = cfg.dim == 2 ? "energies per particle; 2D reduced model (coupling 4 pi g as in 3D)"
                         : "energies per particle";
  r.payload["config"] = gp_config_json(cfg);
  r.payload["seed"] = a.seed;
  r.payload["restart"] = st.restart;
  json e;
  e["total"] = st.energy.total;
  e["kinetic"] = st.energy.kinetic;
  e["trap"] = st.energy.trap;
  e["rotation"] = st.energy.rotation;
  e["interaction"] = st.energy.interaction;
  r.payload["energy"] = e;
  r.payload["mu"] = st.mu;
  r.payload["residual_norm"] = st.residual_norm;
  r.payload["iterations"] = st.iterations;
  r.payload["converged"] = st.converged;
  if (cfg.dim == 2) {
    r.payload["anisotropy"] = gp::anisotropy(st.phi, cfg);
    json vs = json::array();
    for (const auto& v : gp::detect_vortices(st.phi, cfg)) {
      vs.push_back({{"x", v.x}, {"y", v.y}, {"winding", v.winding}});
    }
    r.payload["vortices"] = vs;
  }
  json field;
  field["layout"] = "row-major, x fastest; interleaved (re, im)";
  field["n"] = cfg.grid_n;
  field["dim"] = cfg.dim;
  field["x0"] = cfg.coordinate(0);
  field["spacing"] = cfg.spacing();
  json values = json::array();
  for (const auto& v : st.phi) {
    values.push_back(v.real());
    values.push_back(v.imag());
  }
  field["values"] = std::move(values);
  r.payload["field"] = std::move(field);

  r.rows_in_payload = false;
  r.table.columns = cfg.dim == 2 ? std::vector<std::string>{"x", "y", "re", "im"}
                                 : std::vector<std::string>{"x", "y", "z", "re", "im"};
  const auto x = cfg.coordinates();
  const int n = cfg.grid_n;
  std::size_t k = 0;
  const int nz = cfg.dim == 3 ? n : 1;
  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix, ++k) {
        std::vector<Cell> row{x[ix], x[iy]};
        if (cfg.dim == 3) row.emplace_back(x[iz]);
        row.emplace_back(st.phi[k].real());
        row.emplace_back(st.phi[k].imag());
        r.table.rows.push_back(std::move(row));
      }
    }
  }
  return r;
}

Result gp_scan(const GPScanArgs& a) {
  const auto cfg = gp_config(2, a.s, a.q, 0.0, a.omega, a.grid, a.box);
  require(a.q > 0.0, "--q", "the symmetry-breaking scan needs q > 0");
  require(a.tol > 0.0, "--tol", "must be > 0");
  require(a.max_iter >= 1, "--max-iter", "must be >= 1");
  const auto g_grid = parse_grid(a.g_grid, "--g-grid");
  for (double g : g_grid) require(g >= 0.0, "--g-grid", "couplings must be >= 0");
  const auto seeds = parse_seeds(a.seeds, "--seeds");
  gp::SolverOptions opts;
  opts.tol = a.tol;
  opts.max_iter = a.max_iter;
  const auto scan = gp::symmetry_breaking_scan(cfg, g_grid, seeds, opts, a.jobs);

  Result r;
  r.units = "energies per particle; 2D reduced model (coupling 4 pi g as in 3D)";
  r.table.columns = {"g", "anisotropy", "vortex_count", "total_winding", "energy",
                     "residual_norm", "best_seed", "converged"};
  bool all_converged = true;
  for (const auto& row : scan.rows) {
    r.table.rows.push_back({row.g, row.anisotropy, static_cast<long long>(row.vortex_count),
                            static_cast<long long>(row.total_winding), row.energy, row.residual_norm,
                            static_cast<long long>(row.best_seed), row.converged});
    all_converged = all_converged && row.converged;
  }
  r.payload["config"] = gp_config_json(cfg);
  r.payload["seeds"] = seeds;
  r.payload["onset"] = scan.onset ? json(*scan.onset) : json(nullptr);
  if (!all_converged) {
    r.warning_code = "gp_solver.NotConverged";
    r.warning_message = "at least one g point has no converged seed; rows are flagged";
  }
  return r;
}

Result yrast(const YrastArgs& a) {
  validate_n(a.n);
  const int lmax = a.lmax < 0 ? a.n * (a.n - 1) : a.lmax;
  require(lmax <= 4096, "--lmax", "must be <= 4096");
  const auto table = yrast_points(a.n, lmax, a.jobs);
  Result r;
  r.units = kDeltaUnits;
  r.table.columns = {"L", "dim", "delta_min", "closed_form"};
  for (const auto& p : table) {
    const auto cf = lll::yrast_closed_form(a.n, p.L);
    r.table.rows.push_back({static_cast<long long>(p.L), static_cast<long long>(p.dim), p.delta_min,
                            cf ? Cell(*cf) : Cell(std::monostate{})});
  }
  r.payload["N"] = a.n;
  r.payload["delta_unit"] = lll::delta_unit();
  return r;
}

Result lll_scan(const LLLScanArgs& a) {
  validate_n(a.n);
  const auto grid = parse_grid(a.kappa_grid, "--kappa-grid");
  for (double k : grid) require(k >= 0.0, "--kappa-grid", "kappa must be >= 0");
  const auto table = yrast_points(a.n, a.n * (a.n - 1), a.jobs);
  Result r;
  r.units = "kappa = (1 - |Omega|) / (8 pi a); E0 in units of 8 pi a, includes (2 pi)^(-3/2) in delta";
  r.table.columns = {"kappa", "L_star", "E0"};
  for (const auto& row : lll::hll_ground_scan(table, grid)) {
    r.table.rows.push_back({row.kappa, static_cast<long long>(row.L_star), row.E0});
  }
  r.payload["N"] = a.n;
  r.payload["hull_vertices"] = lll::hull_vertices(table);
  return r;
}

Result laughlin(const LaughlinArgs& a) {
  validate_n(a.n);
  require(a.n <= 16, "--n", "Laughlin expansion supports N <= 16");
  const auto res = lll::laughlin_residual(a.n);
  Result r;
  r.units = kDeltaUnits;
  r.payload["N"] = res.N;
  r.payload["L"] = res.L;
  r.payload["dim"] = static_cast<long long>(res.dim);
  r.payload["residual"] = res.residual;
  return r;
}

Result figure(const FigureArgs& a) {
  if (a.figure == "tc_bound") {
    TcBoundArgs t;
    t.c = a.c;
    t.grid = a.grid;
    t.slope = a.slope;
    Result r = tc_bound(t);
    r.payload = json{{"figure", "tc_bound"}, {"c", a.c}, {"slope", a.slope}};
    return r;
  }
  if (a.figure == "yrast_hull") {
    validate_n(a.n);
    const auto table = yrast_points(a.n, a.n * (a.n - 1), a.jobs);
    const auto verts = lll::hull_vertices(table);
    const auto breaks = lll::hull_breakpoints(table);
    Result r;
    r.units = std::string(kDeltaUnits) +
              "; kappa_low..kappa_high is the range where L is the ground angular momentum";
    r.table.columns = {"L", "delta_min", "on_hull", "kappa_low", "kappa_high"};
    for (const auto& p : table) {
      const auto it = std::find(verts.begin(), verts.end(), p.L);
      std::vector<Cell> row{static_cast<long long>(p.L), p.delta_min, it != verts.end()};
      if (it == verts.end()) {
        row.emplace_back(std::monostate{});
        row.emplace_back(std::monostate{});
      } else {
        const auto i = static_cast<std::size_t>(it - verts.begin());
        row.emplace_back(i < breaks.size() ? Cell(breaks[i]) : Cell(0.0));
        row.emplace_back(i > 0 ? Cell(breaks[i - 1]) : Cell(std::monostate{}));
      }
      r.table.rows.push_back(std::move(row));
    }
    r.payload = json{{"figure", "yrast_hull"}, {"N", a.n}, {"hull_vertices", verts}};
    return r;
  }
  throw ValidationFailed({"figure"}, "figure: expected tc_bound or yrast_hull, got '" + a.figure + "'");
}

}  // namespace coldgas::cli
