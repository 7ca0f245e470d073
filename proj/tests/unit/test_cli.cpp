#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "coldgas/cli/cli.hpp"

using json = nlohmann::json;
namespace cli = coldgas::cli;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream o, e;
  Run r;
  r.code = cli::run(args, o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / "coldgas_cli_test";
  std::filesystem::create_directories(p);
  return p;
}

const double kUnit = std::pow(2.0 * std::numbers::pi, -1.5);

}  // namespace

TEST(Cli, IdealCriticalPointIsAlgebraic) {
  const auto r = call({"ideal", "--rho", "2.612375", "--T", "12.566371"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["payload"]["decay_class"], "algebraic");
  EXPECT_EQ(j["units"].get<std::string>().rfind("hbar = 2m = k_B = 1", 0), 0u);
  EXPECT_EQ(j["config"]["command"], "ideal");
  EXPECT_EQ(j["toolkit"], "coldgas");
}

TEST(Cli, YrastTwoParticles) {
  const auto r = call({"yrast", "--n", "2", "--lmax", "2", "--out", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0].rfind("# units: hbar = 2m = k_B = 1", 0), 0u);
  EXPECT_EQ(ls[1], "L,dim,delta_min,closed_form");
  const double expect[] = {kUnit, kUnit, 0.0};
  for (int i = 0; i < 3; ++i) {
    std::istringstream row(ls[2 + i]);
    std::string L, dim, d;
    std::getline(row, L, ',');
    std::getline(row, dim, ',');
    std::getline(row, d, ',');
    EXPECT_EQ(std::stoi(L), i);
    EXPECT_NEAR(std::stod(d), expect[i], 1e-15);
  }
}

TEST(Cli, MalformedFlagNamesIt) {
  const auto r = call({"ideal", "--rho", "abc", "--T", "1"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  const auto e = json::parse(r.err);
  EXPECT_EQ(e["error"]["code"], "cli.ValidationFailed");
  EXPECT_EQ(e["error"]["fields"], json::array({"--rho"}));

  const auto neg = call({"dilute", "--a", "-1", "--rho", "1", "--T", "0"});
  EXPECT_EQ(neg.code, cli::kExitUsage);
  EXPECT_EQ(json::parse(neg.err)["error"]["fields"], json::array({"--a"}));

  const auto missing = call({"ideal", "--rho", "1"});
  EXPECT_EQ(missing.code, cli::kExitUsage);
  EXPECT_EQ(json::parse(missing.err)["error"]["fields"], json::array({"--T"}));

  const auto extra = call({"ideal", "--rho", "1", "--T", "1", "--nope", "2"});
  EXPECT_EQ(extra.code, cli::kExitUsage);
  EXPECT_EQ(json::parse(extra.err)["error"]["fields"], json::array({"--nope"}));

  const auto grid = call({"tc-bound", "--grid", "0:1"});
  EXPECT_EQ(grid.code, cli::kExitUsage);
  EXPECT_EQ(json::parse(grid.err)["error"]["fields"], json::array({"--grid"}));
}

TEST(Cli, UnknownCommand) {
  const auto r = call({"frobnicate", "--x", "1"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_EQ(json::parse(r.err)["error"]["code"], "cli.UnknownCommand");
  EXPECT_EQ(call({}).code, cli::kExitUsage);
  EXPECT_EQ(call({"--jobs", "2", "nothing"}).code, cli::kExitUsage);
}

TEST(Cli, HelpExitsCleanly) {
  const auto r = call({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("yrast"), std::string::npos);
  EXPECT_EQ(call({"gp", "--help"}).code, 0);
}

TEST(Cli, ModuleErrorsCarryPrefix) {
  const auto r = call({"gp", "--omega", "1.5", "--grid", "16"});
  EXPECT_EQ(r.code, cli::kExitCompute);
  EXPECT_EQ(json::parse(r.err)["error"]["code"], "gp_solver.Unstable");
}

TEST(Cli, RepeatedRunsAreIdentical) {
  const std::vector<std::vector<std::string>> cmds = {
      {"ideal", "--rho", "1", "--T", "3", "--kernel-r", "2"},
      {"dilute", "--a", "0.01", "--rho", "1", "--T", "2"},
      {"yrast", "--n", "3", "--out", "csv"},
      {"gp", "--grid", "24", "--box", "6", "--g", "1", "--omega", "0.3", "--seed", "5", "--out", "csv"},
  };
  for (const auto& c : cmds) {
    const auto a = call(c), b = call(c);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, JsonRoundTrip) {
  for (const auto& c : std::vector<std::vector<std::string>>{
           {"dilute", "--a", "0.01", "--rho", "1", "--T", "2"},
           {"lll-scan", "--n", "3", "--kappa-grid", "0:0.1:0.01"},
       }) {
    const auto r = call(c);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::ordered_json::parse(r.out);
    EXPECT_EQ(j.dump(2) + "\n", r.out);
  }
}

TEST(Cli, ParallelSweepsMatchSerial) {
  const auto s = call({"ideal-sweep", "--rho-grid", "log:0.01:10:40", "--T", "2", "--out", "csv"});
  const auto p = call({"ideal-sweep", "--rho-grid", "log:0.01:10:40", "--T", "2", "--out", "csv", "--jobs", "3"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.out, p.out);
  EXPECT_EQ(lines(s.out).size(), 42u);
  const auto ys = call({"yrast", "--n", "4", "--out", "csv"});
  const auto yp = call({"yrast", "--n", "4", "--out", "csv", "--jobs", "4"});
  EXPECT_EQ(ys.out, yp.out);
}

TEST(Cli, FigureTcBound) {
  const auto r = call({"figure", "tc_bound", "--c", "1", "--grid", "0:0.01:0.001", "--out", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 13u);
  EXPECT_EQ(ls[1], "x,sqrt_bound,linear_reference");
  double prev = -1.0;
  for (std::size_t i = 2; i < ls.size(); ++i) {
    const auto c1 = ls[i].find(','), c2 = ls[i].find(',', c1 + 1);
    const double v = std::stod(ls[i].substr(c1 + 1, c2 - c1 - 1));
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Cli, FigureYrastHull) {
  auto hull = [](int n) {
    const auto r = call({"figure", "yrast_hull", "--n", std::to_string(n)});
    EXPECT_EQ(r.code, 0) << r.err;
    std::vector<int> on;
    const auto j = json::parse(r.out);
    for (const auto& row : j["payload"]["rows"]) {
      if (row["on_hull"].get<bool>()) on.push_back(row["L"].get<int>());
    }
    return on;
  };
  EXPECT_EQ(hull(4), (std::vector<int>{0, 4, 8, 12}));
  EXPECT_EQ(hull(2), (std::vector<int>{0, 2}));
  EXPECT_EQ(call({"figure", "scatterplot"}).code, cli::kExitUsage);
}

TEST(Cli, WritesFilesAndReportsIoErrors) {
  const auto dir = temp_dir();
  const auto path = (dir / "sweep.csv").string();
  ASSERT_EQ(call({"tc-bound", "--out", path}).code, 0);
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str().rfind("# units:", 0), 0u);
  EXPECT_EQ(ss.str().find('\r'), std::string::npos);

  const auto jpath = (dir / "sweep.dat").string();
  ASSERT_EQ(call({"tc-bound", "--out", jpath, "--format", "json"}).code, 0);
  std::ifstream jin(jpath);
  EXPECT_EQ(json::parse(jin)["config"]["output"]["format"], "json");

  const auto bad = call({"tc-bound", "--out", (dir / "missing" / "x.csv").string()});
  EXPECT_EQ(bad.code, cli::kExitIo);
  EXPECT_EQ(json::parse(bad.err)["error"]["code"], "cli.IoError");
}

TEST(Cli, ScatterFromPotentialFile) {
  const auto path = temp_dir() / "soft.json";
  std::ofstream(path) << R"({"hard_core_radius": 0, "tail": {"kind": "soft_sphere", "height": 2, "radius": 1}})";
  const auto r = call({"scatter", "--potential", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["payload"]["a"].get<double>(), 1.0 - std::tanh(1.0), 1e-8);
  EXPECT_NEAR(j["payload"]["born_bound"].get<double>(), 1.0 / 3.0, 1e-14);

  const auto hs = temp_dir() / "hard.json";
  std::ofstream(hs) << R"({"hard_core_radius": 0.5, "tail": {"kind": "none"}})";
  const auto h = json::parse(call({"scatter", "--potential", hs.string()}).out);
  EXPECT_NEAR(h["payload"]["a"].get<double>(), 0.5, 5e-7);
  EXPECT_TRUE(h["payload"]["born_bound_infinite"].get<bool>());

  const auto bad = temp_dir() / "bad.json";
  std::ofstream(bad) << R"({"tail": {"kind": "cubic"}})";
  EXPECT_EQ(call({"scatter", "--potential", bad.string()}).code, cli::kExitUsage);
}

TEST(Cli, GpNotConvergedStillWritesOutput) {
  const auto r = call({"gp", "--grid", "24", "--box", "6", "--g", "1", "--max-iter", "2", "--restarts", "1"});
  EXPECT_EQ(r.code, cli::kExitCompute);
  EXPECT_EQ(json::parse(r.err)["error"]["code"], "gp_solver.NotConverged");
  const auto j = json::parse(r.out);
  EXPECT_FALSE(j["payload"]["converged"].get<bool>());
  EXPECT_EQ(j["payload"]["field"]["values"].size(), 2u * 24 * 24);
}

TEST(Cli, LaughlinResidual) {
  const auto r = call({"laughlin", "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LE(json::parse(r.out)["payload"]["residual"].get<double>(), 1e-9);
}
