#pragma once

#include <memory>
#include <optional>
#include <string>

#include "shearlab/shear.hpp"
#include "shearlab/spectral_field.hpp"
#include "shearlab/transform.hpp"

namespace shearlab {

enum class Frame { couette, general };
enum class Scheme { rk4, heun };

const char* frame_name(Frame f);
Frame parse_frame(const std::string& s);
Scheme parse_scheme(const std::string& s);

struct SolverConfig {
  Frame frame = Frame::couette;
  FrequencyGrid grid{32, 256, 32.0};
  double nu = 1e-2;
  double regularity = 2.0;
  double t_final = 1.0;
  double dt = 0.0;  // > 0: fixed step (still capped by the CFL bound)
  double dt_max = 0.05;
  double cfl = 0.4;
  Scheme scheme = Scheme::rk4;
  bool nonlinear = true;
  double elliptic_tol = 1e-10;
  int elliptic_max_sweeps = 200;
  int shear_refresh = 10;
  double resolution_floor = 1e-14;

  void validate() const;
};

struct EllipticStats {
  long solves = 0;
  int last_sweeps = 0;
  int max_sweeps = 0;
  double last_residual = 0.0;
  double max_contraction = 0.0;  // largest ratio of successive residuals
};

// Explicit terms of the moving-frame equation
// f_t = nu Delta_L f - transport + source + dissipation_error.
struct RhsTerms {
  SpectralField phi;
  SpectralField transport;          // u . grad_t f
  SpectralField source;             // b d_z phi
  SpectralField dissipation_error;  // nu (a^2 - 1) d^L_vv f

  SpectralField combined() const;
};

struct RunState {
  double t = 0.0;
  long steps = 0;
  SpectralField f;
  SpectralField phi;
  double dt_last = 0.0;
  double initial_max = 0.0;  // reference for the resolution check

  explicit RunState(const FrequencyGrid& g) : f(g), phi(g) {}
};

// Delta_t phi = f with Delta_t = Delta_L + (a^2 - 1) d^L_vv + b d^L_v, by the
// fixed point phi <- Delta_L^{-1}(f - R phi). The (0,0) equation is dropped
// (a constant Lagrange multiplier absorbs the compatibility condition), so the
// residual is measured on the remaining modes.
SpectralField solve_poisson_t(const SpectralField& f, const ShearState& shear, double t, double tol,
                              int max_sweeps, Transform& fft, EllipticStats* stats = nullptr);

// exp(-nu int_{t0}^{t1} k^2 + (eta - k tau)^2 dtau) applied in place
void apply_integrating_factor(SpectralField& f, double nu, double t0, double t1);

class Solver {
 public:
  explicit Solver(SolverConfig config, std::optional<ShearProfile> shear = std::nullopt);
  ~Solver();
  Solver(Solver&&) noexcept;
  Solver& operator=(Solver&&) noexcept;

  const SolverConfig& config() const { return config_; }
  const FrequencyGrid& grid() const { return config_.grid; }

  RunState initial_state(const SpectralField& f0);

  // Next step size from the CFL and viscous-remainder bounds, capped at
  // dt_max (or the fixed dt) and at the remaining time.
  double next_dt(const RunState& state);
  // Advances one step. k1, when given, must equal rhs(state.t, state.f).
  void step(RunState& state, double dt, const SpectralField* k1 = nullptr);

  SpectralField stream_function(double t, const SpectralField& f);
  RhsTerms terms(double t, const SpectralField& f);
  SpectralField rhs(double t, const SpectralField& f);

  // Current snapshot of the background; trivial for the Couette frame.
  const ShearState& shear_state() const;
  void refresh_shear(double t);
  bool has_shear() const;
  const ShearProfile* shear_profile() const;

  // Throws ResolutionError when modes with |eta - k t| > eta_cut carry more
  // than resolution_floor * initial_max.
  void check_resolution(const RunState& state) const;
  double resolution_horizon() const;

  const EllipticStats& elliptic_stats() const;
  long cfl_shrinks() const;
  Transform& transform();

 private:
  struct Impl;
  SolverConfig config_;
  std::unique_ptr<Impl> impl_;
};

// Kelvin-horizon screen: every k in 1..k_cut either stays inside the band up
// to t_final or has decayed below the floor (viscous exponent >= ln 1e14) by
// the time it leaves. Throws ResolutionError otherwise.
void prevalidate_resolution(const FrequencyGrid& grid, double nu, double t_final);

}  // namespace shearlab
