#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "shearlab/config.hpp"
#include "shearlab/errors.hpp"
#include "shearlab/io.hpp"
#include "shearlab/kelvin.hpp"
#include "shearlab/multiplier.hpp"
#include "shearlab/plots.hpp"
#include "shearlab/run.hpp"
#include "shearlab/sweep.hpp"

namespace sl = shearlab;

namespace {

sl::RunConfig load(const std::string& path, const std::vector<std::string>& overrides) {
  sl::RunConfig cfg = path.empty() ? sl::RunConfig{} : sl::load_config(path);
  for (const auto& o : overrides) sl::apply_override(cfg, o);
  return cfg;
}

int cmd_simulate(const std::string& config, const std::string& out,
                 const std::vector<std::string>& overrides, long long seed) {
  auto cfg = load(config, overrides);
  if (seed >= 0) cfg.data.seed = static_cast<std::uint64_t>(seed);
  auto res = sl::run_single(cfg, out);
  std::printf("%s: t = %.6g, steps = %ld, classification = %s, budget residual = %.3e\n",
              res.status.c_str(), res.t_reached, res.steps, res.bootstrap.classification.c_str(),
              res.budget_normalized);
  if (!res.message.empty()) std::fprintf(stderr, "%s\n", res.message.c_str());
  for (const auto& w : res.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  return res.exit_code;
}

int cmd_linear(int k, double eta0, double nu, double t_final, int samples, const std::string& out) {
  if (samples < 2) throw sl::ValidationError("need at least 2 samples");
  if (!(t_final > 0.0)) throw sl::ValidationError("t-final must be positive");
  std::string csv = "t,omega,psi,dz_psi,dy_psi,envelope\n";
  const sl::KelvinMode mode{k, eta0, {1.0, 0.0}, nu};
  std::optional<sl::DissipationEnvelope> env;
  if (k != 0 && nu > 0.0) env.emplace(k, eta0, nu);
  for (int i = 0; i < samples; ++i) {
    const double t = t_final * i / (samples - 1);
    const auto s = sl::kelvin_evolve(mode, t);
    const double psi = std::abs(s.psi_hat);
    const double vals[] = {t, std::abs(s.omega_hat), psi, std::abs(k) * psi, std::abs(s.eta_t) * psi,
                           env ? (*env)(t) : 1.0};
    for (std::size_t c = 0; c < std::size(vals); ++c) {
      if (c) csv += ',';
      csv += sl::format_double(vals[c]);
    }
    csv += '\n';
  }
  if (out.empty() || out == "-") {
    std::cout << csv;
  } else {
    sl::atomic_write(out, csv);
  }
  return 0;
}

int cmd_multiplier(int nz, int nv, double lv, double nu, double n_reg, int points, const std::string& out) {
  const sl::FrequencyGrid grid(nz, nv, lv);
  const auto ladder = sl::condition_time_ladder(nu, points);
  const auto rep = sl::verify_conditions(grid, nu, n_reg, ladder);
  const auto json = rep.to_json() + "\n";
  if (out.empty() || out == "-") {
    std::cout << json;
  } else {
    sl::atomic_write(out, json);
    for (const auto& c : rep.checks) {
      std::printf("(%s) %s  constant %.6g  bound %.6g\n", c.name.c_str(), c.pass ? "pass" : "FAIL",
                  c.constant, c.bound);
    }
  }
  return rep.pass ? 0 : sl::kExitViolated;
}

int cmd_sweep(const std::string& config, const std::string& out, const std::vector<std::string>& overrides,
              int workers) {
  auto cfg = load(config, overrides);
  const auto plan = sl::make_plan(cfg);
  const int n = sl::resolve_workers(workers > 0 ? workers : cfg.sweep.workers);
  std::printf("sweep: %zu cells, %d workers\n", plan.cells.size(), n);
  const auto outcome = sl::run_sweep(plan, out, n);
  int stable = 0, violated = 0, failed = 0;
  for (const auto& r : outcome.records) {
    if (r.violated()) {
      ++violated;
    } else if (r.stable()) {
      ++stable;
    } else {
      ++failed;
    }
  }
  std::printf("records: %zu (stable %d, violated %d, failed %d)\n", outcome.records.size(), stable,
              violated, failed);
  if (cfg.output.plots) sl::emit_plots(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shearlab: shear flows near Couette at desk scale"};
  app.require_subcommand(1);

  std::string config, out;
  std::vector<std::string> overrides;
  long long seed = -1;
  auto* sim = app.add_subcommand("simulate", "single run into an output directory");
  sim->add_option("-c,--config", config, "INI configuration");
  sim->add_option("-o,--out", out, "run directory")->required();
  sim->add_option("-s,--set", overrides, "override, section.key=value");
  sim->add_option("--seed", seed, "data seed override");

  int k = 1, samples = 201;
  double eta0 = 0.0, nu = 1e-2, t_final = 10.0;
  std::string lin_out = "-";
  auto* lin = app.add_subcommand("linear", "Kelvin solution of one mode as CSV");
  lin->add_option("--k", k, "z wavenumber");
  lin->add_option("--eta0", eta0, "initial v-frequency");
  lin->add_option("--nu", nu, "viscosity");
  lin->add_option("--t-final", t_final, "final time");
  lin->add_option("--samples", samples, "number of rows");
  lin->add_option("-o,--out", lin_out, "CSV path, - for stdout");

  int nz = 64, nv = 256, points = 40;
  double lv = 32.0, n_reg = 2.0, m_nu = 1e-2;
  std::string m_out = "-";
  auto* mul = app.add_subcommand("multiplier-check", "verify the ghost multiplier conditions");
  mul->add_option("--nz", nz);
  mul->add_option("--nv", nv);
  mul->add_option("--lv", lv);
  mul->add_option("--nu", m_nu);
  mul->add_option("--N", n_reg, "regularity");
  mul->add_option("--points", points, "time samples besides t = 0");
  mul->add_option("-o,--out", m_out, "JSON path, - for stdout");

  std::string sw_config, sw_out;
  std::vector<std::string> sw_overrides;
  int workers = 0;
  auto* sw = app.add_subcommand("sweep", "(nu, eps) threshold sweep");
  sw->add_option("-c,--config", sw_config, "INI configuration with a [sweep] section");
  sw->add_option("-o,--out", sw_out, "sweep directory")->required();
  sw->add_option("-s,--set", sw_overrides, "override, section.key=value");
  sw->add_option("-j,--workers", workers, "worker count (default: SHEARLAB_WORKERS or cores)");

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot", "write plot scripts for a run or sweep directory");
  plot->add_option("dir", plot_dir, "run or sweep directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(config, out, overrides, seed);
    if (*lin) return cmd_linear(k, eta0, nu, t_final, samples, lin_out);
    if (*mul) return cmd_multiplier(nz, nv, lv, m_nu, n_reg, points, m_out);
    if (*sw) return cmd_sweep(sw_config, sw_out, sw_overrides, workers);
    if (*plot) {
      for (const auto& p : sl::emit_plots(plot_dir)) std::printf("%s\n", p.c_str());
      return 0;
    }
  } catch (const sl::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return sl::kExitValidation;
  } catch (const sl::ResolutionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return sl::kExitResolution;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
