#include "shearlab/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <nlohmann/json.hpp>

#include "shearlab/errors.hpp"
#include "shearlab/io.hpp"
#include "shearlab/multiplier.hpp"
#include "shearlab/operators.hpp"
#include "shearlab/plots.hpp"

namespace shearlab {

namespace {

// Multiplier used for diagnostics of inviscid runs.
constexpr double kInviscidMultiplierNu = 1e-12;

nlohmann::json num(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

SolverConfig solver_config(const RunConfig& cfg) {
  SolverConfig s;
  s.frame = cfg.general_frame() ? Frame::general : Frame::couette;
  s.grid = FrequencyGrid(cfg.grid.nz, cfg.grid.nv, cfg.grid.lv);
  s.nu = cfg.physics.nu;
  s.regularity = cfg.physics.regularity;
  s.t_final = cfg.resolved_t_final();
  s.dt = cfg.time.dt;
  s.dt_max = cfg.time.dt_max;
  s.cfl = cfg.time.cfl;
  s.scheme = parse_scheme(cfg.time.scheme);
  s.nonlinear = cfg.physics.nonlinear;
  s.elliptic_tol = cfg.elliptic.tol;
  s.elliptic_max_sweeps = cfg.elliptic.max_sweeps;
  s.shear_refresh = cfg.shear.refresh;
  return s;
}

DataSpec data_spec(const RunConfig& cfg) {
  DataSpec d;
  d.kind = cfg.data.kind;
  d.k = cfg.data.k;
  d.j = cfg.data.j;
  d.k_max = cfg.data.k_max;
  d.eta_max = cfg.data.eta_max;
  d.width = cfg.data.width;
  return d;
}

std::optional<ShearProfile> make_profile(const RunConfig& cfg) {
  const int n = cfg.grid.nv;
  const double lv = cfg.grid.lv;
  const double s = cfg.resolved_s();
  const auto& sh = cfg.shear;
  if (sh.profile == "couette") return std::nullopt;
  if (sh.profile == "gauss_bump") {
    return sh.delta > 0.0 ? gauss_bump_with_delta(n, lv, sh.delta, sh.width, s)
                          : gauss_bump_profile(n, lv, sh.amplitude, sh.width, s);
  }
  if (sh.profile == "tanh_defect") return tanh_defect_profile(n, lv, sh.amplitude, sh.width, s);
  if (sh.profile == "table") return table_profile(sh.table, n, lv, s);
  throw ValidationError("unknown shear profile " + sh.profile);
}

RunResult simulate(const RunConfig& cfg,
                   const std::function<void(const Checkpoint&)>& on_checkpoint) {
  RunResult res;
  std::optional<Solver> solver;
  std::optional<RunState> state;
  bool localized = cfg.data.kind != "single_mode";
  const double nu = cfg.physics.nu;

  // validation: nothing is stepped before this block succeeds
  try {
    cfg.validate();
    res.t_final = cfg.resolved_t_final();
    res.eps = cfg.data.eps;
    auto profile = make_profile(cfg);
    if (profile) {
      res.shear_delta = profile->delta;
      if (validate_profile(*profile, cfg.shear.delta_max)) {
        res.warnings.push_back("shear perturbation spillover above the soft limit");
      }
    }
    const SolverConfig sc = solver_config(cfg);
    auto f0 = initial_data(data_spec(cfg), sc.grid, cfg.data.eps, cfg.physics.regularity,
                           cfg.data.seed);
    if (localized) {
      Transform fft(sc.grid);
      if (check_spillover(spillover_fraction(fft.inverse(f0)), "initial data")) {
        res.warnings.push_back("initial data spillover above the soft limit");
      }
    }
    solver.emplace(sc, std::move(profile));
    state.emplace(solver->initial_state(f0));
  } catch (const ResolutionError& e) {
    res.exit_code = kExitResolution;
    res.status = "resolution";
    res.message = e.what();
    return res;
  } catch (const InversionError& e) {
    res.exit_code = kExitElliptic;
    res.status = "elliptic";
    res.message = e.what();
    return res;
  } catch (const EllipticError& e) {
    res.exit_code = kExitElliptic;
    res.status = "elliptic";
    res.message = e.what();
    return res;
  } catch (const Error& e) {
    res.exit_code = kExitValidation;
    res.status = "validation";
    res.message = e.what();
    return res;
  }

  const auto& grid = solver->grid();
  const MultiplierParams mp{nu > 0.0 ? nu : kInviscidMultiplierNu, cfg.physics.regularity};
  const Frame frame = solver->config().frame;
  Transform spill_fft(grid);
  auto snapshot = [&](const RunState& s) {
    return Checkpoint{grid, nu, cfg.physics.regularity, s.t, frame, s.f};
  };

  using clock = std::chrono::steady_clock;
  auto last_checkpoint = clock::now();
  const double interval = cfg.output.checkpoint_interval;

  try {
    while (true) {
      RhsTerms terms = solver->terms(state->t, state->f);
      MultiplierState ms(grid, mp, state->t);
      res.frames.push_back(
          compute_frame(state->t, state->f, terms, ms, solver->shear_state(), nu, frame));
      res.last_state = snapshot(*state);
      if (state->t >= res.t_final) break;
      if (on_checkpoint && interval > 0.0 &&
          std::chrono::duration<double>(clock::now() - last_checkpoint).count() >= interval) {
        on_checkpoint(*res.last_state);
        last_checkpoint = clock::now();
      }
      if (localized && state->steps % cfg.output.decimate == 0 && state->steps > 0) {
        if (check_spillover(spillover_fraction(spill_fft.inverse(state->f)), "solution") &&
            res.warnings.size() < 8) {
          res.warnings.push_back("solution spillover above the soft limit at t = " +
                                 std::to_string(state->t));
        }
      }
      const double dt = solver->next_dt(*state);
      SpectralField k1 = terms.combined();
      solver->step(*state, dt, &k1);
    }
  } catch (const NumericalError& e) {
    res.exit_code = kExitNumerical;
    res.status = "numerical";
    res.message = e.what();
  } catch (const ResolutionError& e) {
    res.exit_code = kExitResolution;
    res.status = "resolution";
    res.message = e.what();
  } catch (const SpilloverError& e) {
    res.exit_code = kExitResolution;
    res.status = "resolution";
    res.message = e.what();
  } catch (const InversionError& e) {
    res.exit_code = kExitElliptic;
    res.status = "elliptic";
    res.message = e.what();
  } catch (const EllipticError& e) {
    res.exit_code = kExitElliptic;
    res.status = "elliptic";
    res.message = e.what();
  }

  res.t_reached = state->t;
  res.steps = state->steps;
  res.elliptic = solver->elliptic_stats();
  res.cfl_shrinks = solver->cfl_shrinks();

  if (res.frames.size() >= 2) {
    auto budget = budget_residual(res.frames);
    for (std::size_t i = 0; i < res.frames.size(); ++i) res.frames[i].budget_residual = budget.residual[i];
    res.budget_normalized = budget.normalized;
  }
  res.bootstrap = check_bootstrap(res.frames, cfg.data.eps, nu);

  if (nu > 0.0 && res.exit_code == kExitStable) {
    std::vector<double> t, y;
    for (const auto& f : res.frames) {
      t.push_back(f.t);
      y.push_back(f.nz_L2);
    }
    try {
      res.rate_fit = fit_enhanced_dissipation(t, y, nu);
    } catch (const Error& e) {
      res.rate_fit_note = e.what();
    }
  }
  if (res.exit_code == kExitStable && res.bootstrap.classification == "violated") {
    res.exit_code = kExitViolated;
    res.status = "violated";
    res.message = "bootstrap bound exceeded at t = " + std::to_string(res.bootstrap.first_violation_t);
  }
  return res;
}

std::string RunResult::summary_json() const {
  nlohmann::json j;
  j["status"] = status;
  j["exit_code"] = exit_code;
  j["message"] = message;
  j["t_final"] = t_final;
  j["t_reached"] = t_reached;
  j["steps"] = steps;
  j["eps"] = eps;
  j["shear_delta"] = shear_delta;
  j["budget_residual_normalized"] = num(budget_normalized);
  j["bootstrap"] = nlohmann::json::parse(bootstrap.to_json());
  if (rate_fit) {
    j["rate_fit"] = nlohmann::json::parse(rate_fit->to_json());
  } else {
    j["rate_fit"] = nullptr;
    if (!rate_fit_note.empty()) j["rate_fit_note"] = rate_fit_note;
  }
  j["elliptic"] = {{"solves", elliptic.solves},
                   {"max_sweeps", elliptic.max_sweeps},
                   {"last_residual", elliptic.last_residual},
                   {"max_contraction", elliptic.max_contraction}};
  j["cfl_shrinks"] = cfl_shrinks;
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

RunResult run_single(const RunConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  RunConfig echoed = cfg;
  if (echoed.time.t_final == 0.0 && echoed.physics.nu > 0.0) echoed.time.t_final = cfg.resolved_t_final();
  if (echoed.shear.s == 0.0) echoed.shear.s = cfg.resolved_s();
  atomic_write((fs::path(out_dir) / "config.ini").string(), to_ini(echoed));

  const fs::path dir(out_dir);
  const std::string ck_path = (dir / "checkpoint.bin").string();
  RunResult res = simulate(cfg, [&](const Checkpoint& ck) { write_checkpoint(ck_path, ck); });
  atomic_write((dir / "series.csv").string(), frames_to_csv(res.frames, cfg.output.decimate));
  if (res.rate_fit) atomic_write((dir / "rate_fit.json").string(), res.rate_fit->to_json() + "\n");
  if (res.last_state) write_checkpoint(ck_path, *res.last_state);
  atomic_write((dir / "summary.json").string(), res.summary_json());
  if (cfg.output.plots && !res.frames.empty()) emit_plots(out_dir);
  return res;
}

}  // namespace shearlab
