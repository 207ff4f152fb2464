#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "shearlab/multiplier.hpp"
#include "shearlab/solver.hpp"

namespace shearlab {

struct DiagnosticFrame {
  double t = 0.0;
  double E_A = 0.0;      // ||A f||^2
  double D_visc = 0.0;   // nu ||grad_L A f||^2
  double D_ghost = 0.0;  // ||sqrt(-dM M) <D>^N f||^2
  double nz_HN = 0.0;    // ||f_nz||_{H^N}
  double z_HN = 0.0;     // ||f_0||_{H^N}
  double nz_L2 = 0.0;    // ||f_nz||_{L^2}
  double psi_nz = 0.0;   // ||phi_nz||_{L^2}
  double u0_L2 = 0.0;    // ||u_0^z||_{L^2}
  double du0_L2 = 0.0;   // ||d_v u_0^z||_{L^2}
  double u0v_max = 0.0;  // max |u_0^v| (zero by construction)
  double grad_omega = 0.0;
  double interp_constant = 0.0;  // max_{k != 0} 1 / (nu^{-1/6}(sqrt(-dM M) + nu^{1/2}|k, eta-kt|))

  // inner products for the energy budget
  double transport_in = 0.0;          // <A transport, A f>
  double source_in = 0.0;             // <A source, A f>
  double dissipation_error_in = 0.0;  // <A dissipation_error, A f>
  double zero_flux = 0.0;             // transfer into 1/2 ||u_0||^2 (Couette frame)

  double budget_residual = 0.0;
};

// All functionals at one time. terms must be the explicit terms of f at t.
DiagnosticFrame compute_frame(double t, const SpectralField& f, const RhsTerms& terms,
                              const MultiplierState& multiplier, const ShearState& shear,
                              double nu, Frame frame);

struct BudgetReport {
  std::vector<double> residual;  // per frame
  double max_abs = 0.0;
  double normalized = 0.0;  // max |r| / max E_A
};

// r = 1/2 dE_A/dt + D_visc + D_ghost + <A T, Af> - <A S, Af> - <A DE, Af>,
// with dE_A/dt from a 7-point stencil over the frame times.
BudgetReport budget_residual(std::span<const DiagnosticFrame> frames);
// Same identity for 1/2 ||u_0||^2 in the Couette frame.
BudgetReport zero_mode_budget(std::span<const DiagnosticFrame> frames, double nu);

struct RateFit {
  double window_start = 0.0;
  double window_end = 0.0;
  double c = 0.0;  // log ||f_nz|| ~ -c nu t^3 + intercept on the window
  double intercept = 0.0;
  double residual = 0.0;
  std::size_t points = 0;
  double t_e = NAN;  // first time ||f_nz|| <= ||f_nz(0)|| / e
  double t_enhanced = 0.0;  // nu^{-1/3}
  double t_heat = 0.0;      // nu^{-1/2}

  std::string to_json() const;
};

// Time at which y first drops to y[0]/e, by log-linear interpolation; NaN
// if it never does.
double time_to_e_fold(std::span<const double> t, std::span<const double> y);

RateFit fit_enhanced_dissipation(std::span<const double> t, std::span<const double> nz_l2, double nu,
                                 double t_critical = 0.0);

struct BootstrapReport {
  std::string classification = "strong";  // strong | stable | violated
  double first_violation_t = NAN;
  double eps = 0.0;
  double nu = 0.0;
  double sup_Af = 0.0;
  double visc_L2 = 0.0;   // (int D_visc dt)^{1/2}
  double ghost_L2 = 0.0;  // (int D_ghost dt)^{1/2}
  double sup_u0 = 0.0;
  double du0_L2 = 0.0;    // (int nu ||d_v u_0||^2 dt)^{1/2}
  double group_a = 0.0;   // sup_Af + visc_L2 + ghost_L2
  double group_b = 0.0;   // sup_u0 + du0_L2
  double fnz_L2HN = 0.0;  // ||f_nz||_{L^2 H^N}
  double K = 0.0;         // fnz_L2HN / (eps nu^{-1/6})
  double transient_growth = 1.0;  // max_t ||grad omega|| / ||grad omega(0)||

  std::string to_json() const;
};

BootstrapReport check_bootstrap(std::span<const DiagnosticFrame> frames, double eps, double nu);

// Decimated per-run CSV; the last frame is always kept.
std::string frames_to_csv(std::span<const DiagnosticFrame> frames, int decimate);

}  // namespace shearlab
