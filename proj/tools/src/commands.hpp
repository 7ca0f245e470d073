#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "output.hpp"

namespace coldgas::cli {

struct ScatterArgs {
  std::string potential;  // path to a potential JSON file
  std::optional<double> rmax;
  std::optional<double> step;
  int samples = 101;  // u(r) samples echoed in JSON
};

struct IdealArgs {
  double rho = 0.0;
  double T = 0.0;
  std::optional<double> kernel_r;
  double crit_rtol = 1e-6;
};

struct IdealSweepArgs {
  std::string rho_grid;
  double T = 0.0;
  double crit_rtol = 1e-6;
  int jobs = 1;
};

struct DiluteArgs {
  double a = 0.0;
  double rho = 0.0;
  double T = 0.0;
  double c = 1.0;
};

struct TcBoundArgs {
  double c = 1.0;
  std::string grid = "0:0.01:0.001";
  double slope = 1.3;
};

struct GPArgs {
  int dim = 2;
  double s = 0.25;
  double q = 0.0;
  double g = 0.0;
  double omega = 0.0;
  int grid = 128;
  double box = 0.0;
  double tol = 1e-8;
  int max_iter = 20000;
  int restarts = 5;
  std::uint64_t seed = 0;
};

struct GPScanArgs {
  double s = 0.25;
  double q = 0.02;
  double omega = 0.95;
  std::string g_grid;
  std::string seeds = "0..4";
  int grid = 128;
  double box = 0.0;
  double tol = 1e-8;
  int max_iter = 20000;
  int jobs = 1;
};

struct YrastArgs {
  int n = 0;
  int lmax = -1;  // default N(N-1)
  int jobs = 1;
};

struct LLLScanArgs {
  int n = 0;
  std::string kappa_grid;
  int jobs = 1;
};

struct LaughlinArgs {
  int n = 0;
};

struct FigureArgs {
  std::string figure;  // tc_bound | yrast_hull
  double c = 1.0;
  std::string grid = "0:0.01:0.001";
  double slope = 1.3;
  int n = 4;
  int jobs = 1;
};

Result scatter(const ScatterArgs& a);
Result ideal(const IdealArgs& a);
Result ideal_sweep(const IdealSweepArgs& a);
Result dilute(const DiluteArgs& a);
Result tc_bound(const TcBoundArgs& a);
Result gp(const GPArgs& a);
Result gp_scan(const GPScanArgs& a);
Result yrast(const YrastArgs& a);
Result lll_scan(const LLLScanArgs& a);
Result laughlin(const LaughlinArgs& a);
Result figure(const FigureArgs& a);

}  // namespace coldgas::cli
