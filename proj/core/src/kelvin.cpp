#include "shearlab/kelvin.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <vector>

#include "shearlab/errors.hpp"
#include "shearlab/fitting.hpp"

namespace shearlab {

double viscous_exponent(int k, double eta, double nu, double t0, double t1) {
  const double a = eta - k * t0;
  const double b = eta - k * t1;
  // (a^3 - b^3) / (3k) = (t1 - t0)(a^2 + ab + b^2)/3
  return nu * (t1 - t0) * (static_cast<double>(k) * k + (a * a + a * b + b * b) / 3.0);
}

KelvinSample kelvin_evolve(const KelvinMode& mode, double t) {
  if (t < 0.0) throw ValidationError("kelvin_evolve: t must be >= 0");
  KelvinSample s;
  s.eta_t = mode.eta0 - mode.k * t;
  s.zero_mode_branch = mode.k == 0;
  const double decay = std::exp(-viscous_exponent(mode.k, mode.eta0, mode.nu, 0.0, t));
  s.omega_hat = mode.amplitude * decay;
  const double denom = static_cast<double>(mode.k) * mode.k + s.eta_t * s.eta_t;
  s.psi_hat = denom > 0.0 ? -s.omega_hat / denom : std::complex<double>{0.0, 0.0};
  return s;
}

double critical_time(int k, double eta0) {
  if (k == 0) throw ValidationError("critical time undefined for k = 0");
  return eta0 / k;
}

DissipationEnvelope::DissipationEnvelope(int k, double eta0, double nu)
    : c_(static_cast<double>(k) * k / 3.0), nu_(nu) {
  if (k == 0) throw ValidationError("no enhanced dissipation for the zero mode (k = 0)");
  if (!(nu > 0.0)) throw ValidationError("enhanced dissipation envelope needs nu > 0");
  shift_ = std::max(critical_time(k, eta0), 0.0);
}

double DissipationEnvelope::operator()(double t) const {
  if (t <= shift_) return 1.0;
  const double s = t - shift_;
  return std::exp(-c_ * nu_ * s * s * s);
}

DissipationEnvelope enhanced_dissipation_envelope(int k, double eta0, double nu) {
  return DissipationEnvelope(k, eta0, nu);
}

double e_folding_time(int k, double eta0, double nu) {
  if (!(nu > 0.0)) throw ValidationError("e_folding_time needs nu > 0");
  auto g = [&](double t) { return viscous_exponent(k, eta0, nu, 0.0, t) - 1.0; };
  double hi = 1.0;
  while (g(hi) < 0.0) hi *= 2.0;
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(g, 0.0, hi, boost::math::tools::eps_tolerance<double>(52),
                                             iters);
  return 0.5 * (r.first + r.second);
}

std::pair<double, double> default_damping_window(int k, double eta0) {
  const double tc = critical_time(k, eta0);
  return {2.0 * tc + 5.0, 10.0 * tc + 50.0};
}

DampingFit inviscid_damping_check(const KelvinMode& mode, std::span<const double> times) {
  if (mode.k == 0) throw ValidationError("inviscid damping needs k != 0");
  if (mode.nu < 0.0) throw ValidationError("inviscid damping needs nu >= 0");
  if (times.size() < 4) throw ValidationError("inviscid damping fit needs at least 4 sample times");
  const double tc = critical_time(mode.k, mode.eta0);
  std::vector<double> x, lpsi, ldz, ldy;
  for (double t : times) {
    if (t <= tc) throw ValidationError("inviscid damping samples must lie past the critical time");
    const auto s = kelvin_evolve(mode, t);
    const double d = t - tc;
    x.push_back(0.5 * std::log1p(d * d));
    lpsi.push_back(std::log(std::abs(s.psi_hat)));
    ldz.push_back(std::log(std::abs(static_cast<double>(mode.k) * s.psi_hat)));
    ldy.push_back(std::log(std::abs(s.eta_t * s.psi_hat)));
  }
  const auto fp = fit_line(x, lpsi);
  const auto fz = fit_line(x, ldz);
  const auto fy = fit_line(x, ldy);
  return {fp.slope, fz.slope, fy.slope, fp.residual, fy.residual};
}

}  // namespace shearlab
