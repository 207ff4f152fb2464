#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shearlab/config.hpp"
#include "shearlab/io.hpp"

namespace shearlab {

struct SweepCell {
  int id = 0;
  std::string stage = "grid";  // grid | bisect
  std::string profile = "couette";
  double nu = 0.0;
  double A = 0.0;
  double gamma = 0.0;
  double eps = 0.0;  // A nu^gamma
  std::uint64_t seed = 0;
  double t_final = 0.0;
};

struct SweepRecord {
  SweepCell cell;
  std::string status;
  int exit_code = 0;
  std::string classification;
  double first_violation_t = 0.0;
  double fitted_c = 0.0;
  double t_e = 0.0;
  double sup_Af = 0.0;
  double visc_L2 = 0.0;
  double ghost_L2 = 0.0;
  double sup_u0 = 0.0;
  double du0_L2 = 0.0;
  double group_a = 0.0;
  double group_b = 0.0;
  double fnz_L2HN = 0.0;
  double K = 0.0;
  std::string checkpoint;  // relative to the sweep directory
  double runtime = 0.0;    // seconds; kept out of the records file

  bool stable() const { return exit_code == 0 && classification != "violated"; }
  bool violated() const { return classification == "violated"; }
};

struct SweepPlan {
  RunConfig base;
  std::vector<double> nus;
  std::vector<SweepCell> cells;  // coarse grid in deterministic order
};

std::vector<double> nu_ladder(const SweepConfig& sweep);
// Builds and validates the coarse grid: configs, band limits and the Kelvin
// resolution horizon of every cell are checked before anything runs.
SweepPlan make_plan(const RunConfig& cfg);
RunConfig cell_config(const RunConfig& base, const SweepCell& cell);

// Explicit request, else SHEARLAB_WORKERS, else hardware concurrency.
int resolve_workers(int requested);

struct SweepOutcome {
  std::vector<SweepRecord> records;
  std::string summary_json;
};

// Writes cells/<id>/, records.csv, timings.csv and summary.json under out_dir.
SweepOutcome run_sweep(const SweepPlan& plan, const std::string& out_dir, int workers);

std::string records_to_csv(const std::vector<SweepRecord>& records);
// Summary computed from the records table alone.
std::string summarize_records(const CsvTable& records);

}  // namespace shearlab
