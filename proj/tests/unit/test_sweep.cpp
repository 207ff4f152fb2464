#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <nlohmann/json.hpp>

#include "shearlab/errors.hpp"
#include "shearlab/io.hpp"
#include "shearlab/plots.hpp"
#include "shearlab/run.hpp"
#include "shearlab/sweep.hpp"

namespace fs = std::filesystem;
using namespace shearlab;
using doctest::Approx;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("shearlab_test_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig small_sweep() {
  RunConfig cfg;
  cfg.grid = {8, 128, 16.0};
  cfg.data.width = 1.0;
  cfg.time.t_final = 1.0;
  cfg.sweep.nu_list = {1e-2, 3e-2};
  cfg.sweep.a_list = {0.05};
  cfg.sweep.gamma_list = {0.5};
  cfg.sweep.seeds = {1, 2};
  cfg.sweep.bisect_rounds = 0;
  cfg.shear.delta = 0.01;
  return cfg;
}

// Synthetic records table with columns the summary reads; other columns are zero.
CsvTable synthetic(const std::vector<std::tuple<std::string, double, double, double, int, std::string>>& rows) {
  std::vector<SweepRecord> recs;
  int id = 0;
  for (const auto& [profile, nu, A, gamma, seed, cls] : rows) {
    SweepRecord r;
    r.cell.id = id++;
    r.cell.profile = profile;
    r.cell.nu = nu;
    r.cell.A = A;
    r.cell.gamma = gamma;
    r.cell.eps = A * std::pow(nu, gamma);
    r.cell.seed = static_cast<std::uint64_t>(seed);
    r.classification = cls;
    r.status = cls == "violated" ? "violated" : "ok";
    r.exit_code = cls == "violated" ? kExitViolated : kExitStable;
    recs.push_back(r);
  }
  return parse_csv(records_to_csv(recs));
}

}  // namespace

TEST_CASE("nu ladder") {
  SweepConfig sw;
  sw.nu_min = 1e-3;
  sw.nu_max = 1e-2;
  sw.points_per_decade = 2;
  const auto l = nu_ladder(sw);
  REQUIRE(l.size() == 3);
  CHECK(l[0] == Approx(1e-3));
  CHECK(l[1] == Approx(std::sqrt(1e-5)));
  CHECK(l[2] == Approx(1e-2));
  sw.nu_list = {3e-2, 1e-3};
  CHECK(nu_ladder(sw) == std::vector<double>{1e-3, 3e-2});
  sw.nu_list.clear();
  sw.nu_min = 0.0;
  CHECK_THROWS_AS(nu_ladder(sw), ValidationError);
}

TEST_CASE("worker resolution") {
  CHECK(resolve_workers(3) == 3);
  ::setenv("SHEARLAB_WORKERS", "5", 1);
  CHECK(resolve_workers(0) == 5);
  ::setenv("SHEARLAB_WORKERS", "junk", 1);
  CHECK(resolve_workers(0) >= 1);
  ::setenv("SHEARLAB_WORKERS", "2", 1);
}

TEST_CASE("plan construction") {
  auto cfg = small_sweep();
  cfg.sweep.profiles = {"couette", "gauss_bump"};
  const auto plan = make_plan(cfg);
  CHECK(plan.cells.size() == 2 * 2 * 2);
  for (std::size_t i = 0; i < plan.cells.size(); ++i) {
    CHECK(plan.cells[i].id == static_cast<int>(i));
    CHECK(plan.cells[i].eps == Approx(0.05 * std::sqrt(plan.cells[i].nu)));
  }
  const auto rc = cell_config(cfg, plan.cells[5]);
  CHECK(rc.physics.nu == plan.cells[5].nu);
  CHECK(rc.data.seed == plan.cells[5].seed);
  CHECK(rc.shear.profile == plan.cells[5].profile);

  SUBCASE("default horizon scales with nu") {
    auto c2 = small_sweep();
    c2.time.t_final = 0.0;
    c2.sweep.t_final_factor = 0.5;
    const auto p2 = make_plan(c2);
    CHECK(p2.cells[0].t_final == Approx(0.5 / std::cbrt(p2.cells[0].nu)));
  }
  SUBCASE("unresolvable horizon is rejected up front") {
    auto bad = small_sweep();
    bad.time.t_final = 200.0;
    bad.sweep.nu_list = {1e-4};
    CHECK_THROWS_AS(make_plan(bad), ResolutionError);
  }
  SUBCASE("band violations are rejected up front") {
    auto bad = small_sweep();
    bad.data.k_max = 40;
    CHECK_THROWS_AS(make_plan(bad), ValidationError);
  }
  SUBCASE("empty axes are rejected") {
    auto bad = small_sweep();
    bad.sweep.seeds.clear();
    CHECK_THROWS_AS(make_plan(bad), ValidationError);
    bad = small_sweep();
    bad.sweep.a_list.clear();
    CHECK_THROWS_AS(make_plan(bad), ValidationError);
  }
}

TEST_CASE("zero amplitude sweep") {
  const auto dir = scratch("sweep_zero");
  auto cfg = small_sweep();
  cfg.sweep.eps_list = {0.0};
  const auto out = run_sweep(make_plan(cfg), dir.string(), 2);
  REQUIRE(out.records.size() == 4);
  for (const auto& r : out.records) {
    CHECK(r.stable());
    CHECK(r.exit_code == kExitStable);
  }
  const auto j = nlohmann::json::parse(out.summary_json);
  CHECK(j["failed"] == 0);
  CHECK(j["profiles"]["couette"]["gamma=0"]["gamma_hat"] == "undefined");
  CHECK(j["monotonicity_violations"].empty());
  fs::remove_all(dir);
}

TEST_CASE("sweep outputs are reproducible") {
  const auto a = scratch("sweep_a");
  const auto b = scratch("sweep_b");
  auto cfg = small_sweep();
  cfg.sweep.profiles = {"couette", "gauss_bump"};
  const auto plan = make_plan(cfg);
  const auto ra = run_sweep(plan, a.string(), 2);
  const auto rb = run_sweep(plan, b.string(), 1);

  const auto csv_a = read_file((a / "records.csv").string());
  CHECK(csv_a == read_file((b / "records.csv").string()));
  CHECK(read_file((a / "summary.json").string()) == read_file((b / "summary.json").string()));
  CHECK(summarize_records(read_csv((a / "records.csv").string())) ==
        read_file((a / "summary.json").string()));
  CHECK(fs::exists(a / "timings.csv"));
  CHECK(fs::exists(a / "plan.ini"));
  for (const auto& r : ra.records) {
    CHECK(r.stable());
    CHECK(r.K > 0.0);
    REQUIRE_FALSE(r.checkpoint.empty());
    CHECK(fs::exists(a / r.checkpoint));
  }

  const auto scripts = emit_plots(a.string());
  int boundary = 0;
  for (const auto& p : scripts) boundary += p.find("boundary") != std::string::npos;
  CHECK(boundary == 2);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("summary from records") {
  SUBCASE("boundary and exponent fit") {
    // eps* = 0.2 nu^{0.75} with A brackets [0.2, 0.4] at each nu, gamma = 0.5
    std::vector<std::tuple<std::string, double, double, double, int, std::string>> rows;
    for (double nu : {1e-3, 1e-2, 1e-1}) {
      const double astar = 0.2 * std::pow(nu, 0.25);
      rows.emplace_back("couette", nu, astar, 0.5, 1, "stable");
      rows.emplace_back("couette", nu, 2.0 * astar, 0.5, 1, "violated");
      rows.emplace_back("couette", nu, 4.0 * astar, 0.5, 1, "violated");
    }
    const auto j = nlohmann::json::parse(summarize_records(synthetic(rows)));
    const auto& body = j["profiles"]["couette"]["gamma=0.5"];
    CHECK(body["fit_points"] == 3);
    CHECK(body["gamma_hat"].get<double>() == Approx(0.75).epsilon(1e-12));
    for (const auto& e : body["boundary"]) {
      CHECK(e["bracketed"] == true);
      CHECK(e["A_violated"].get<double>() == Approx(2.0 * e["A_star"].get<double>()));
    }
    CHECK(j["classification_counts"]["violated"] == 6);
    CHECK(j["monotonicity_violations"].empty());
  }
  SUBCASE("unbracketed groups have no exponent") {
    const auto j = nlohmann::json::parse(summarize_records(synthetic({
        {"couette", 1e-2, 0.1, 0.5, 1, "stable"},
        {"couette", 1e-3, 0.1, 0.5, 1, "stable"},
    })));
    CHECK(j["profiles"]["couette"]["gamma=0.5"]["gamma_hat"] == "undefined");
    CHECK(j["profiles"]["couette"]["gamma=0.5"]["boundary"][0]["A_violated"].is_null());
  }
  SUBCASE("a seed violating at one seed blocks stability of that A") {
    const auto j = nlohmann::json::parse(summarize_records(synthetic({
        {"couette", 1e-2, 0.1, 0.5, 1, "stable"},
        {"couette", 1e-2, 0.2, 0.5, 1, "stable"},
        {"couette", 1e-2, 0.2, 0.5, 2, "violated"},
    })));
    const auto& e = j["profiles"]["couette"]["gamma=0.5"]["boundary"][0];
    CHECK(e["A_star"].get<double>() == Approx(0.1));
    CHECK(e["A_violated"].get<double>() == Approx(0.2));
  }
  SUBCASE("non-monotone columns are flagged") {
    const auto j = nlohmann::json::parse(summarize_records(synthetic({
        {"couette", 1e-2, 0.1, 0.5, 1, "stable"},
        {"couette", 1e-2, 0.2, 0.5, 1, "violated"},
        {"couette", 1e-2, 0.4, 0.5, 1, "stable"},
    })));
    REQUIRE(j["monotonicity_violations"].size() == 1);
    const auto& f = j["monotonicity_violations"][0];
    CHECK(f["eps_violated"].get<double>() == Approx(0.2 * 0.1));
    CHECK(f["eps_not_violated"].get<double>() == Approx(0.4 * 0.1));
  }
  SUBCASE("malformed rows are rejected") {
    auto t = synthetic({{"couette", 1e-2, 0.1, 0.5, 1, "stable"}});
    t.rows[0].pop_back();
    CHECK_THROWS_AS(summarize_records(t), ValidationError);
  }
}
