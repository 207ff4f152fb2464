// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// nonzero when any criterion fails. Criterion numbers given on the command
// line restrict the run to those.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "shearlab/checkpoint.hpp"
#include "shearlab/diagnostics.hpp"
#include "shearlab/fitting.hpp"
#include "shearlab/initial_data.hpp"
#include "shearlab/io.hpp"
#include "shearlab/kelvin.hpp"
#include "shearlab/multiplier.hpp"
#include "shearlab/operators.hpp"
#include "shearlab/run.hpp"
#include "shearlab/shear.hpp"
#include "shearlab/solver.hpp"
#include "shearlab/sweep.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace shearlab;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("shearlab_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

void multiplier_validation(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const FrequencyGrid grid(64, 256, 32.0);
  for (double nu : {1e-1, 1e-2, 1e-3}) {
    const auto ladder = condition_time_ladder(nu, 24);
    const auto rep = verify_conditions(grid, nu, 2.0, ladder);
    o.detail << "nu=" << nu << ":";
    for (const auto& c : rep.checks) {
      o.detail << " " << c.name << (c.pass ? "+" : "-");
      o.require(c.pass, "condition " + c.name + " at nu " + std::to_string(nu));
    }
    o.detail << " C_d=" << rep.check("d").constant << " C_e=" << rep.check("e").constant
             << " C_f=" << rep.check("f").constant << "; ";
  }
  double worst = 0.0;
  for (int k : {-3, 1, 2, 7}) {
    for (double xi : {-40.0, -2.5, 0.0, 1.0, 12.0, 90.0}) {
      for (double nu : {1e-1, 1e-2, 1e-3}) {
        for (double t : condition_time_ladder(nu, 6)) {
          const auto ode = oracle::multiplier_ode(t, k, xi, nu);
          worst = std::max(worst, std::abs(m1(t, k, xi) - ode.m1) / ode.m1);
          worst = std::max(worst, std::abs(m2(t, k, xi, nu) - ode.m2) / ode.m2);
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  o.detail << "ODE rel err " << worst << ", " << secs << " s";
  o.require(worst <= 1e-8, "closed forms vs ODE");
  o.require(secs < 60.0, "runtime under 1 min");
}

void kelvin_exactness(Outcome& o) {
  double worst = 0.0;
  for (int k : {1, 2, 5}) {
    for (int eta = -10; eta <= 10; ++eta) {
      for (double t : {0.1, 1.0, 10.0}) {
        const double q = oracle::kelvin_exponent_quadrature(k, eta, 0.1, t);
        worst = std::max(worst, std::abs(viscous_exponent(k, eta, 0.1, 0.0, t) - q) / q);
      }
    }
  }
  o.detail << "quadrature rel err " << worst;
  o.require(worst <= 1e-10, "closed form vs quadrature");

  const KelvinMode mode{1, 0.0, 1.0, 0.0};
  const auto [a, b] = default_damping_window(mode.k, mode.eta0);
  const auto fit = inviscid_damping_check(mode, geometric_ladder(a, b, 40, false));
  o.detail << "; slopes psi " << fit.psi_slope << ", d_y psi " << fit.dy_psi_slope;
  o.require(std::abs(fit.psi_slope + 2.0) <= 0.05, "psi slope");
  o.require(std::abs(fit.dy_psi_slope + 1.0) <= 0.05, "d_y psi slope");

  const KelvinMode orr{1, 10.0, 1.0, 0.0};
  const double amp = std::abs(kelvin_evolve(orr, critical_time(1, 10.0)).psi_hat) /
                     std::abs(kelvin_evolve(orr, 0.0).psi_hat);
  o.detail << "; Orr amplification " << amp;
  o.require(std::abs(amp - 101.0) / 101.0 <= 1e-12, "Orr amplification");
}

void solver_vs_oracle(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const double nu = 1e-2;
  SolverConfig cfg;
  cfg.grid = FrequencyGrid(128, 512, 32.0);
  cfg.nu = nu;
  cfg.t_final = 2.0 / std::cbrt(nu);
  Solver solver(cfg);
  DataSpec d;
  d.kind = "single_mode";
  const auto f0 = initial_data(d, cfg.grid, 1e-6, 2.0, 0);
  RunState st = solver.initial_state(f0);
  double worst = 0.0;
  while (st.t < cfg.t_final) {
    solver.step(st, solver.next_dt(st));
    SpectralField expect = f0;
    expect *= kelvin_evolve({1, 0.0, 1.0, nu}, st.t).omega_hat.real();
    worst = std::max(worst, oracle::rel_error(st.f, expect));
  }
  const double secs = seconds_since(t0);
  o.detail << "max rel L2 error " << worst << " over " << st.steps << " steps, " << secs << " s";
  o.require(worst <= 1e-3, "rel L2 error");
  o.require(secs < 300.0, "runtime under 5 min");
}

void enhanced_dissipation(Outcome& o) {
  std::vector<double> lx, ly;
  double te4 = NAN;
  for (double nu : {1e-2, 1e-3, 1e-4}) {
    RunConfig cfg;
    cfg.grid = {8, 1024, 16.0};
    cfg.physics.nu = nu;
    cfg.physics.nonlinear = false;
    cfg.data.kind = "single_mode";
    cfg.data.eps = 1e-6;
    cfg.time.t_final = 2.0 / std::cbrt(nu);
    const auto r = simulate(cfg);
    o.require(r.exit_code == kExitStable, "linear run at nu " + std::to_string(nu) + ": " + r.message);
    std::vector<double> t, y;
    for (const auto& f : r.frames) {
      t.push_back(f.t);
      y.push_back(f.nz_L2);
    }
    const double te = time_to_e_fold(t, y);
    o.detail << "t_e(" << nu << ")=" << te << " [root " << oracle::e_fold_cardano(nu) << "]; ";
    o.require(std::isfinite(te), "e-fold reached");
    lx.push_back(std::log(nu));
    ly.push_back(std::log(te));
    if (nu == 1e-4) te4 = te;
  }
  const auto lf = fit_line(lx, ly);
  o.detail << "slope " << lf.slope << ", t_e(1e-4) " << te4 << " vs 0.5 nu^{-1/2} = 50";
  o.require(std::abs(lf.slope + 1.0 / 3.0) <= 0.05, "log-log slope");
  o.require(te4 <= 0.5 / std::sqrt(1e-4), "below half the heat time");
}

RunConfig budget_run(double dt, const char* scheme = "rk4") {
  RunConfig cfg;
  cfg.time.scheme = scheme;
  cfg.grid = {16, 512, 32.0};
  cfg.physics.nu = 1e-2;
  cfg.data.eps = 1e-3;
  cfg.data.seed = 7;
  cfg.time.dt = dt;
  cfg.time.t_final = 4.0;
  return cfg;
}

// Residual under dt halving for each scheme; the expected reduction is at
// least 2^order.
void budget_closure(Outcome& o) {
  for (const auto& [scheme, order, dts] :
       {std::tuple<const char*, double, std::vector<double>>{"rk4", 4.0, {0.04, 0.02}},
        {"heun", 2.0, {0.02, 0.01}}}) {
    std::vector<double> res;
    for (double dt : dts) {
      const auto r = simulate(budget_run(dt, scheme));
      o.require(r.exit_code == kExitStable, std::string(scheme) + " run: " + r.message);
      res.push_back(r.budget_normalized);
    }
    const double p = std::log2(res[0] / res[1]);
    o.detail << scheme << " dt=" << dts[0] << ": " << res[0] << ", dt=" << dts[1] << ": " << res[1]
             << ", observed order " << p << "; ";
    o.require(res[0] <= 1e-4 && res[1] <= 1e-4, std::string(scheme) + " normalized residual");
    o.require(p >= order - 0.5, std::string(scheme) + " reduction at its order");
  }
}

void general_frame(Outcome& o) {
  {
    SolverConfig cfg;
    cfg.grid = FrequencyGrid(8, 128, 16.0);
    cfg.nu = 1e-2;
    cfg.t_final = 5.0;
    cfg.dt = 0.05;
    Solver couette(cfg);
    auto gcfg = cfg;
    gcfg.frame = Frame::general;
    Solver general(gcfg, gauss_bump_with_delta(128, 16.0, 0.0, 1.0, 4.0));
    DataSpec d;
    d.width = 1.0;
    const auto f0 = initial_data(d, cfg.grid, 0.5, 2.0, 2);
    auto a = couette.initial_state(f0);
    auto b = general.initial_state(f0);
    for (int i = 0; i < 100; ++i) {
      couette.step(a, 0.05);
      general.step(b, 0.05);
    }
    const double err = oracle::rel_error(b.f, a.f);
    o.detail << "delta=0 frame difference " << err;
    o.require(err <= 1e-10, "delta = 0 reduction");
  }
  {
    SolverConfig cfg;
    cfg.grid = FrequencyGrid(16, 256, 32.0);
    cfg.nu = 1e-2;
    cfg.t_final = 2.0;
    cfg.frame = Frame::general;
    Solver s(cfg, gauss_bump_with_delta(256, 32.0, 0.01, 1.0, 4.0));
    DataSpec d;
    const auto f0 = initial_data(d, cfg.grid, 1e-3, 2.0, 3);
    RunState st = s.initial_state(f0);
    while (st.t < cfg.t_final) s.step(st, s.next_dt(st));
    const auto& es = s.elliptic_stats();
    o.detail << "; delta=0.01 contraction " << es.max_contraction << " (max sweeps " << es.max_sweeps
             << ")";
    o.require(es.solves > 0 && es.max_contraction <= 0.2, "elliptic contraction");
  }
  double chain = 0.0, trip = 0.0;
  const auto p = gauss_bump_with_delta(256, 32.0, 0.01, 1.0, 4.0);
  for (double t : {0.0, 1.0, 5.0, 20.0}) {
    const auto st = make_shear_state(p, 1e-2, t);
    chain = std::max(chain, chain_rule_residual(st));
    trip = std::max(trip, round_trip_error(st.y_side, st.map));
  }
  o.detail << "; chain rule " << chain << ", round trip " << trip;
  o.require(chain <= 1e-8, "chain rule residual");
  o.require(trip <= 1e-10, "coordinate round trip");
}

void threshold_stability(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg;
  cfg.grid = {16, 768, 16.0};
  cfg.data.width = 1.0;
  cfg.shear.delta = 0.01;
  cfg.sweep.nu_list = {1e-3, 3e-3, 1e-2};
  cfg.sweep.a_list = {0.05};
  cfg.sweep.gamma_list = {0.5};
  cfg.sweep.profiles = {"couette", "gauss_bump"};
  cfg.sweep.seeds = {1, 2, 3};
  cfg.sweep.bisect_rounds = 0;
  const auto dir = scratch("threshold");
  const auto out = run_sweep(make_plan(cfg), dir.string(), resolve_workers(0));
  int stable = 0;
  double k_max = 0.0, group_max = 0.0;
  for (const auto& r : out.records) {
    stable += r.stable();
    k_max = std::max(k_max, r.K);
    group_max = std::max({group_max, r.group_a / r.cell.eps, r.group_b / r.cell.eps});
    if (!r.stable()) {
      o.detail << "cell " << r.cell.id << " (" << r.cell.profile << ", nu " << r.cell.nu << ", seed "
               << r.cell.seed << ") " << r.status << "/" << r.classification << "; ";
    }
  }
  const double secs = seconds_since(t0);
  o.detail << stable << "/" << out.records.size() << " stable, max group/eps " << group_max
           << ", max K " << k_max << ", " << secs << " s";
  o.require(out.records.size() == 18 && stable == 18, "every run stable");
  o.require(secs <= 3600.0, "runtime under 1 h");
  fs::remove_all(dir);
}

void heat_budget(Outcome& o) {
  const auto p = gauss_bump_with_delta(256, 32.0, 0.01, 1.0, 4.0);
  for (double nu : {1e-2, 1e-3}) {
    const auto hb = heat_norm_budget(p.g, nu, 3.0 / std::cbrt(nu), p.s);
    // the infinite-time integral of ||U''||^2 is ||U'||^2 / (2 nu) mode by mode
    const double cap = hb.up0 / std::sqrt(2.0 * nu);
    o.detail << "nu=" << nu << ": sup U' " << hb.sup_up << "/" << hb.up0 << ", sup U'' " << hb.sup_upp
             << "/" << hb.upp0 << ", K " << hb.k_constant << "; ";
    o.require(hb.pass, "sup bounds at nu " + std::to_string(nu));
    o.require(hb.l2t_upp <= cap * (1.0 + 1e-10), "time integral bound at nu " + std::to_string(nu));
  }
  const double nu = 1e-2, T = 30.0, amp = 0.01;
  const auto g = Profile1D::from_function(64, 2.0 * std::acos(-1.0), [&](double y) { return amp * std::cos(y); });
  const auto hb = heat_norm_budget(g, nu, T, 0.0);
  const double upp0 = g.derivative(2).l2_norm();
  const double exact = upp0 * upp0 * (1.0 - std::exp(-2.0 * nu * T)) / (2.0 * nu);
  const double err = std::abs(hb.l2t_upp * hb.l2t_upp - exact) / exact;
  o.detail << "single-mode integral rel err " << err;
  o.require(err <= 1e-8, "single-mode integral");
}

void determinism(Outcome& o) {
  RunConfig cfg;
  cfg.grid = {16, 256, 16.0};
  cfg.data.width = 1.0;
  cfg.time.t_final = 3.0;
  cfg.shear.delta = 0.01;
  cfg.sweep.nu_list = {1e-2, 3e-2};
  cfg.sweep.a_list = {0.05, 0.5};
  cfg.sweep.profiles = {"couette", "gauss_bump"};
  cfg.sweep.seeds = {1, 2};
  cfg.sweep.bisect_rounds = 0;
  const auto plan = make_plan(cfg);
  const auto a = scratch("determinism_a");
  const auto b = scratch("determinism_b");
  run_sweep(plan, a.string(), resolve_workers(0));
  run_sweep(plan, b.string(), 1);
  const bool same = read_file((a / "records.csv").string()) == read_file((b / "records.csv").string());
  o.detail << plan.cells.size() << " cells, records " << (same ? "identical" : "differ");
  o.require(same, "byte-identical records");

  const auto path = (a / "cells" / "cell_0000" / "checkpoint.bin").string();
  const std::string bytes = read_file(path);
  const auto ck = read_checkpoint(path);
  const auto rt = (a / "roundtrip.bin").string();
  write_checkpoint(rt, ck);
  const bool exact = read_file(rt) == bytes && encode_checkpoint(decode_checkpoint(bytes)) == bytes;
  o.detail << "; checkpoint round trip " << (exact ? "bit-exact" : "differs");
  o.require(exact, "checkpoint round trip");
  fs::remove_all(a);
  fs::remove_all(b);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"multiplier validation", multiplier_validation},
      {"Kelvin oracle exactness", kelvin_exactness},
      {"solver vs oracle", solver_vs_oracle},
      {"enhanced dissipation scaling", enhanced_dissipation},
      {"energy budget closure", budget_closure},
      {"general-frame reduction", general_frame},
      {"threshold stability", threshold_stability},
      {"heat-semigroup budget", heat_budget},
      {"determinism and persistence", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    failures += !o.pass;
    std::printf("criterion %d %s: %s  %s (%.1f s)\n", id, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.str().c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
