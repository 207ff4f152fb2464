#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "shearlab/checkpoint.hpp"
#include "shearlab/config.hpp"
#include "shearlab/diagnostics.hpp"
#include "shearlab/initial_data.hpp"
#include "shearlab/solver.hpp"

namespace shearlab {

// Process exit codes of a single run.
enum ExitCode : int {
  kExitStable = 0,
  kExitNumerical = 1,
  kExitViolated = 2,
  kExitResolution = 3,
  kExitElliptic = 4,
  kExitValidation = 64,
};

struct RunResult {
  int exit_code = kExitStable;
  std::string status = "ok";  // ok | violated | numerical | resolution | elliptic | validation
  std::string message;
  double t_final = 0.0;
  double t_reached = 0.0;
  long steps = 0;
  double eps = 0.0;
  double shear_delta = 0.0;
  std::vector<DiagnosticFrame> frames;
  BootstrapReport bootstrap;
  std::optional<RateFit> rate_fit;
  std::string rate_fit_note;
  double budget_normalized = 0.0;
  EllipticStats elliptic;
  long cfl_shrinks = 0;
  std::vector<std::string> warnings;
  std::optional<Checkpoint> last_state;

  std::string summary_json() const;
};

SolverConfig solver_config(const RunConfig& cfg);
DataSpec data_spec(const RunConfig& cfg);
// Shear profile sampled on the v-grid; nullopt for Couette.
std::optional<ShearProfile> make_profile(const RunConfig& cfg);

// Runs solver and diagnostics in memory. on_checkpoint, when set, receives
// the current state every output.checkpoint_interval wall seconds.
RunResult simulate(const RunConfig& cfg,
                   const std::function<void(const Checkpoint&)>& on_checkpoint = {});

// simulate() plus the run directory: config.ini, series.csv, summary.json,
// rate_fit.json and checkpoint.bin.
RunResult run_single(const RunConfig& cfg, const std::string& out_dir);

}  // namespace shearlab
