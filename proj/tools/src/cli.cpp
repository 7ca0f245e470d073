#include "coldgas/cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <set>

#include <CLI11.hpp>

#include "coldgas/errors.hpp"
#include "commands.hpp"

#ifndef COLDGAS_VERSION
#define COLDGAS_VERSION "0.0.0"
#endif

namespace coldgas::cli {

namespace {

const std::set<std::string> kCommands = {"scatter", "ideal",   "ideal-sweep", "dilute",
                                         "tc-bound", "gp",     "gp-scan",     "yrast",
                                         "lll-scan", "laughlin", "figure"};
const std::set<std::string> kValueGlobals = {"--out", "--format", "--seed", "--jobs"};

class UnknownCommand : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_error(std::ostream& err, const std::string& code, const std::string& message,
                 const std::vector<std::string>& fields) {
  json e;
  e["error"]["code"] = code;
  e["error"]["message"] = message;
  e["error"]["fields"] = fields;
  err << e.dump() << '\n';
}

std::vector<std::string> flags_in(const std::string& message) {
  static const std::regex flag_re("--[A-Za-z0-9-]+");
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(message.begin(), message.end(), flag_re); it != std::sregex_iterator();
       ++it) {
    if (std::find(out.begin(), out.end(), it->str()) == out.end()) out.push_back(it->str());
  }
  return out;
}

// First bare token, skipping global options and their values.
std::optional<std::string> command_token(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--") return std::nullopt;
    if (a.rfind("-", 0) == 0) {
      if (kValueGlobals.count(a)) ++i;
      continue;
    }
    return a;
  }
  return std::nullopt;
}

struct Globals {
  std::string out = "json";
  std::string format;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct Output {
  std::string format;  // json | csv
  std::string path;    // empty -> stdout
};

Output resolve_output(const Globals& g) {
  Output o;
  if (g.out == "json" || g.out == "csv" || g.out == "-") {
    o.format = g.out == "-" ? "json" : g.out;
  } else {
    o.path = g.out;
    const auto dot = g.out.rfind('.');
    o.format = dot != std::string::npos && g.out.substr(dot) == ".csv" ? "csv" : "json";
  }
  if (!g.format.empty()) {
    if (g.format != "json" && g.format != "csv") {
      throw ValidationFailed({"--format"}, "--format: expected json or csv");
    }
    o.format = g.format;
  }
  if (g.jobs < 1 || g.jobs > 1024) throw ValidationFailed({"--jobs"}, "--jobs: must be in [1, 1024]");
  return o;
}

json params_of(const CLI::App* sub) {
  json p = json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0) continue;
    std::string name = opt->get_name(false, true);
    if (name.rfind("--", 0) == 0) name = name.substr(2);
    if (name == "help" || name.empty()) continue;
    const auto& res = opt->results();
    if (res.size() == 1) {
      p[name] = res.front();
    } else {
      p[name] = res;
    }
  }
  return p;
}

std::string render(const Result& r, const Output& o, const std::string& command, const json& params,
                   const Globals& g) {
  const std::string units = r.units.empty() ? kUnitNote : std::string(kUnitNote) + "; " + r.units;
  if (o.format == "csv") {
    return to_csv(r.table.columns.empty() ? flatten(r.payload) : r.table, units);
  }
  json env;
  env["toolkit"] = "coldgas";
  env["version"] = COLDGAS_VERSION;
  env["timestamp"] = timestamp();
  json cfg;
  cfg["command"] = command;
  cfg["params"] = params;
  cfg["output"] = {{"format", o.format}, {"path", o.path.empty() ? json(nullptr) : json(o.path)}};
  cfg["seed"] = g.seed;
  cfg["parallelism"] = g.jobs;
  env["config"] = std::move(cfg);
  env["units"] = units;
  json payload = r.payload;
  if (!r.table.columns.empty() && r.rows_in_payload) payload["rows"] = rows_to_json(r.table);
  env["payload"] = std::move(payload);
  return env.dump(2) + "\n";
}

void emit(const std::string& text, const Output& o, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream f(o.path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoFailure("cannot open '" + o.path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoFailure("failed writing '" + o.path + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"coldgas: dilute cold Bose gas toolkit (units hbar = 2m = k_B = 1)", "coldgas"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", COLDGAS_VERSION);

  Globals g;
  app.add_option("--out", g.out, "json | csv (stdout) or an output path; .csv selects CSV");
  app.add_option("--format", g.format, "json | csv; overrides the --out guess");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--jobs", g.jobs, "worker threads for sweeps");

  std::function<Result()> action;

  ScatterArgs scatter_a;
  auto* s_scatter = app.add_subcommand("scatter", "zero-energy scattering length of a radial potential");
  s_scatter->add_option("--potential", scatter_a.potential, "potential JSON file")->required();
  s_scatter->add_option("--rmax", scatter_a.rmax, "outer integration radius");
  s_scatter->add_option("--step", scatter_a.step, "RK4 step");
  s_scatter->add_option("--samples", scatter_a.samples, "u(r) samples in the JSON payload");
  s_scatter->callback([&] { action = [&] { return scatter(scatter_a); }; });

  IdealArgs ideal_a;
  auto* s_ideal = app.add_subcommand("ideal", "ideal Bose gas thermodynamics at one (rho, T)");
  s_ideal->add_option("--rho", ideal_a.rho, "density")->required();
  s_ideal->add_option("--T", ideal_a.T, "temperature")->required();
  s_ideal->add_option("--kernel-r", ideal_a.kernel_r, "also evaluate the OBDM kernel at this distance");
  s_ideal->add_option("--crit-rtol", ideal_a.crit_rtol, "relative window around rho_c classed as critical");
  s_ideal->callback([&] { action = [&] { return ideal(ideal_a); }; });

  IdealSweepArgs sweep_a;
  auto* s_sweep = app.add_subcommand("ideal-sweep", "ideal gas over a density grid");
  s_sweep->add_option("--rho-grid", sweep_a.rho_grid, "start:stop:step | log:a:b:n | a,b,c")->required();
  s_sweep->add_option("--T", sweep_a.T, "temperature")->required();
  s_sweep->add_option("--crit-rtol", sweep_a.crit_rtol, "relative window around rho_c classed as critical");
  s_sweep->callback([&] {
    action = [&] {
      sweep_a.jobs = g.jobs;
      return ideal_sweep(sweep_a);
    };
  });

  DiluteArgs dilute_a;
  auto* s_dilute = app.add_subcommand("dilute", "dilute-gas energies and free energy");
  s_dilute->add_option("--a", dilute_a.a, "scattering length")->required();
  s_dilute->add_option("--rho", dilute_a.rho, "density")->required();
  s_dilute->add_option("--T", dilute_a.T, "temperature")->required();
  s_dilute->add_option("--c", dilute_a.c, "constant in the T_c bound");
  s_dilute->callback([&] { action = [&] { return dilute(dilute_a); }; });

  TcBoundArgs tc_a;
  auto* s_tc = app.add_subcommand("tc-bound", "critical-temperature bound curve");
  s_tc->add_option("--c", tc_a.c, "bound constant");
  s_tc->add_option("--grid", tc_a.grid, "x = a rho^(1/3) grid");
  s_tc->add_option("--slope", tc_a.slope, "slope of the linear reference line");
  s_tc->callback([&] { action = [&] { return tc_bound(tc_a); }; });

  GPArgs gp_a;
  auto* s_gp = app.add_subcommand("gp", "Gross-Pitaevskii ground state in a rotating trap");
  s_gp->add_option("--dim", gp_a.dim, "2 or 3");
  s_gp->add_option("--s", gp_a.s, "harmonic coefficient");
  s_gp->add_option("--q", gp_a.q, "quartic coefficient");
  s_gp->add_option("--g", gp_a.g, "coupling (N a)");
  s_gp->add_option("--omega", gp_a.omega, "rotation frequency");
  s_gp->add_option("--grid", gp_a.grid, "points per axis");
  s_gp->add_option("--box", gp_a.box, "box half width (0: default)");
  s_gp->add_option("--tol", gp_a.tol, "relative residual tolerance");
  s_gp->add_option("--max-iter", gp_a.max_iter, "iteration cap per restart");
  s_gp->add_option("--restarts", gp_a.restarts, "random restarts");
  s_gp->callback([&] {
    action = [&] {
      gp_a.seed = g.seed;
      return gp(gp_a);
    };
  });

  GPScanArgs scan_a;
  auto* s_scan = app.add_subcommand("gp-scan", "symmetry-breaking scan over the coupling");
  s_scan->add_option("--s", scan_a.s, "harmonic coefficient");
  s_scan->add_option("--q", scan_a.q, "quartic coefficient");
  s_scan->add_option("--omega", scan_a.omega, "rotation frequency");
  s_scan->add_option("--g-grid", scan_a.g_grid, "couplings")->required();
  s_scan->add_option("--seeds", scan_a.seeds, "lo..hi or a,b,c");
  s_scan->add_option("--grid", scan_a.grid, "points per axis");
  s_scan->add_option("--box", scan_a.box, "box half width (0: default)");
  s_scan->add_option("--tol", scan_a.tol, "relative residual tolerance");
  s_scan->add_option("--max-iter", scan_a.max_iter, "iteration cap");
  s_scan->callback([&] {
    action = [&] {
      scan_a.jobs = g.jobs;
      return gp_scan(scan_a);
    };
  });

  YrastArgs yrast_a;
  auto* s_yrast = app.add_subcommand("yrast", "lowest contact-interaction eigenvalue per L");
  s_yrast->add_option("--n", yrast_a.n, "particle number")->required();
  s_yrast->add_option("--lmax", yrast_a.lmax, "largest L (default N(N-1))");
  s_yrast->callback([&] {
    action = [&] {
      yrast_a.jobs = g.jobs;
      return yrast(yrast_a);
    };
  });

  LLLScanArgs lll_a;
  auto* s_lll = app.add_subcommand("lll-scan", "ground angular momentum against kappa");
  s_lll->add_option("--n", lll_a.n, "particle number")->required();
  s_lll->add_option("--kappa-grid", lll_a.kappa_grid, "kappa grid")->required();
  s_lll->callback([&] {
    action = [&] {
      lll_a.jobs = g.jobs;
      return lll_scan(lll_a);
    };
  });

  LaughlinArgs laughlin_a;
  auto* s_laughlin = app.add_subcommand("laughlin", "contact energy of the bosonic Laughlin state");
  s_laughlin->add_option("--n", laughlin_a.n, "particle number")->required();
  s_laughlin->callback([&] { action = [&] { return laughlin(laughlin_a); }; });

  FigureArgs fig_a;
  auto* s_fig = app.add_subcommand("figure", "figure data: tc_bound or yrast_hull");
  s_fig->add_option("figure", fig_a.figure, "tc_bound | yrast_hull")->required();
  s_fig->add_option("--c", fig_a.c, "tc_bound: bound constant");
  s_fig->add_option("--grid", fig_a.grid, "tc_bound: x grid");
  s_fig->add_option("--slope", fig_a.slope, "tc_bound: linear reference slope");
  s_fig->add_option("--n", fig_a.n, "yrast_hull: particle number");
  s_fig->callback([&] {
    action = [&] {
      fig_a.jobs = g.jobs;
      return figure(fig_a);
    };
  });

  std::string command;
  try {
    if (auto tok = command_token(args); tok && !kCommands.count(*tok)) {
      throw UnknownCommand("unknown command '" + *tok + "'");
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::CallForVersion&) {
      out << COLDGAS_VERSION << '\n';
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      throw ValidationFailed(flags_in(e.what()), e.what());
    }
    const auto subs = app.get_subcommands();
    if (subs.empty() || !action) {
      err << app.help();
      write_error(err, "cli.UnknownCommand", "no command given", {});
      return kExitUsage;
    }
    command = subs.front()->get_name();
    const Output o = resolve_output(g);
    const json params = params_of(subs.front());
    const Result r = action();
    emit(render(r, o, command, params, g), o, out);
    if (!r.warning_code.empty()) {
      write_error(err, r.warning_code, r.warning_message, {});
      return kExitCompute;
    }
    return kExitOk;
  } catch (const UnknownCommand& e) {
    write_error(err, "cli.UnknownCommand", e.what(), {});
    return kExitUsage;
  } catch (const ValidationFailed& e) {
    write_error(err, "cli.ValidationFailed", e.what(), e.fields());
    return kExitUsage;
  } catch (const IoFailure& e) {
    write_error(err, "cli.IoError", e.what(), {});
    return kExitIo;
  } catch (const coldgas::Error& e) {
    write_error(err, e.code(), e.what(), {});
    return kExitCompute;
  } catch (const std::exception& e) {
    write_error(err, "cli.Internal", e.what(), {});
    return kExitCompute;
  }
}

}  // namespace coldgas::cli
