#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace shearlab {

struct GridConfig {
  int nz = 32;
  int nv = 256;
  double lv = 32.0;
};

struct PhysicsConfig {
  double nu = 1e-2;
  double regularity = 2.0;  // N
  bool nonlinear = true;
};

struct TimeConfig {
  double t_final = 0.0;  // 0: 3 nu^{-1/3}
  double dt = 0.0;       // 0: CFL-controlled
  double dt_max = 0.05;
  double cfl = 0.4;
  std::string scheme = "rk4";  // rk4 | heun
};

struct DataConfig {
  std::string kind = "random_band";  // single_mode | random_band | dipole
  double eps = 1e-3;
  int k = 1;
  int j = 0;
  int k_max = 2;
  double eta_max = 2.0;
  double width = 1.5;
  std::uint64_t seed = 1;
};

struct ShearConfig {
  std::string profile = "couette";  // couette | gauss_bump | tanh_defect | table
  std::string frame = "auto";       // auto | couette | general
  double amplitude = 0.01;
  double width = 1.0;
  double delta = 0.0;  // > 0: rescale the amplitude to hit this delta (gauss_bump)
  double s = 0.0;      // 0: N + 2
  double delta_max = 0.05;
  std::string table;
  int refresh = 10;
};

struct EllipticConfig {
  double tol = 1e-10;
  int max_sweeps = 200;
};

struct OutputConfig {
  int decimate = 10;
  double checkpoint_interval = 600.0;  // wall seconds; <= 0 disables periodic checkpoints
  bool plots = false;
};

struct SweepConfig {
  double nu_min = 1e-3;
  double nu_max = 1e-2;
  int points_per_decade = 2;
  std::vector<double> nu_list;  // overrides the geometric ladder when non-empty
  std::vector<double> a_list{0.05};
  std::vector<double> gamma_list{0.5};
  std::vector<double> eps_list;  // explicit epsilons; overrides a/gamma
  std::vector<std::string> profiles{"couette"};
  std::vector<std::uint64_t> seeds{1};
  double t_final_factor = 3.0;  // T = factor * nu^{-1/3}
  int bisect_rounds = 3;
  int workers = 0;  // 0: environment or hardware
};

struct RunConfig {
  GridConfig grid;
  PhysicsConfig physics;
  TimeConfig time;
  DataConfig data;
  ShearConfig shear;
  EllipticConfig elliptic;
  OutputConfig output;
  SweepConfig sweep;

  // t_final with the 3 nu^{-1/3} default applied
  double resolved_t_final() const;
  double resolved_s() const;
  bool general_frame() const;
  void validate() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);
// Applies "section.key=value".
void apply_override(RunConfig& cfg, const std::string& assignment);
// Every key with its resolved value, in INI form.
std::string to_ini(const RunConfig& cfg);

}  // namespace shearlab
