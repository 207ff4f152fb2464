#pragma once

#include <complex>
#include <span>
#include <utility>

namespace shearlab {

// One Fourier mode of the linearised Couette problem. eta0 is the moving-frame
// (initial) v-frequency.
struct KelvinMode {
  int k = 1;
  double eta0 = 0.0;
  std::complex<double> amplitude{1.0, 0.0};
  double nu = 0.0;
};

struct KelvinSample {
  std::complex<double> omega_hat;
  std::complex<double> psi_hat;
  double eta_t = 0.0;  // original-frame frequency eta0 - k t
  bool zero_mode_branch = false;
};

// nu * int_{t0}^{t1} k^2 + (eta - k tau)^2 dtau in closed form. The cubic
// difference is factored so that k = 0 and short intervals stay accurate.
double viscous_exponent(int k, double eta, double nu, double t0, double t1);

KelvinSample kelvin_evolve(const KelvinMode& mode, double t);

// Critical time eta0/k at which the original-frame frequency crosses zero.
double critical_time(int k, double eta0);

// t -> exp(-c nu (t - shift)^3) with c = k^2/3 and shift = max(t_c, 0). The
// exact viscous exponent dominates c nu (t - shift)^3 for t >= shift.
class DissipationEnvelope {
 public:
  DissipationEnvelope(int k, double eta0, double nu);
  double operator()(double t) const;
  double rate_constant() const { return c_; }
  double shift() const { return shift_; }

 private:
  double c_;
  double nu_;
  double shift_;
};

DissipationEnvelope enhanced_dissipation_envelope(int k, double eta0, double nu);

// Smallest t with viscous_exponent(k, eta0, nu, 0, t) = 1.
double e_folding_time(int k, double eta0, double nu);

struct DampingFit {
  double psi_slope = 0.0;     // log|psi| vs log<t - t_c>, expect -2
  double dz_psi_slope = 0.0;  // expect -2
  double dy_psi_slope = 0.0;  // original-frame d_y psi, expect -1
  double psi_residual = 0.0;
  double dy_psi_residual = 0.0;
};

DampingFit inviscid_damping_check(const KelvinMode& mode, std::span<const double> times);

// Default fit window [2 t_c + 5, 10 t_c + 50].
std::pair<double, double> default_damping_window(int k, double eta0);

}  // namespace shearlab
