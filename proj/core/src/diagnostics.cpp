#include "shearlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "shearlab/errors.hpp"
#include "shearlab/fitting.hpp"
#include "shearlab/io.hpp"
#include "shearlab/operators.hpp"

namespace shearlab {

DiagnosticFrame compute_frame(double t, const SpectralField& f, const RhsTerms& terms,
                              const MultiplierState& multiplier, const ShearState& shear,
                              double nu, Frame frame) {
  const auto& g = f.grid();
  require_same_grid(g, multiplier.grid());
  DiagnosticFrame d;
  d.t = t;

  const auto a = multiplier.a();
  const auto m = multiplier.m();
  const auto rate = multiplier.rate();
  const double half_n = 0.5 * multiplier.params().regularity;
  const double nu16 = nu > 0.0 ? std::pow(nu, -1.0 / 6.0) : 0.0;
  const double sqnu = std::sqrt(nu);
  const auto fc = f.coeffs();
  const auto tc = terms.transport.coeffs();
  const auto sc = terms.source.coeffs();
  const auto dc = terms.dissipation_error.coeffs();
  const auto pc = terms.phi.coeffs();

  double nz_hn = 0.0, z_hn = 0.0, nz_l2 = 0.0, psi = 0.0, grad = 0.0;
  for (int iz = 0; iz < g.nz(); ++iz) {
    const int k = g.k_of(iz);
    for (int iv = 0; iv < g.nv(); ++iv) {
      const std::size_t i = g.flat(iz, iv);
      const double eta = g.eta_of(iv);
      const double s = eta - k * t;
      const double lap = static_cast<double>(k) * k + s * s;
      const double a2 = a[i] * a[i];
      const double f2 = std::norm(fc[i]);
      d.E_A += a2 * f2;
      d.D_visc += nu * lap * a2 * f2;
      d.D_ghost += rate[i] * a2 * f2;
      d.transport_in += a2 * (tc[i] * std::conj(fc[i])).real();
      d.source_in += a2 * (sc[i] * std::conj(fc[i])).real();
      d.dissipation_error_in += a2 * (dc[i] * std::conj(fc[i])).real();
      const double hn = std::pow(1.0 + static_cast<double>(k) * k + eta * eta, 2.0 * half_n) * f2;
      if (k == 0) {
        z_hn += hn;
      } else {
        nz_hn += hn;
        nz_l2 += f2;
        psi += std::norm(pc[i]);
        if (nu > 0.0) {
          const double q = nu16 * (std::sqrt(rate[i]) * m[i] + sqnu * std::sqrt(lap));
          d.interp_constant = std::max(d.interp_constant, 1.0 / q);
        }
      }
      if (frame == Frame::couette || shear.trivial) grad += lap * f2;
    }
  }
  d.nz_HN = std::sqrt(nz_hn);
  d.z_HN = std::sqrt(z_hn);
  d.nz_L2 = std::sqrt(nz_l2);
  d.psi_nz = std::sqrt(psi);

  // zero-mode velocity u_0^z = -a d_v phi_0; u_0^v = d_z phi has no k = 0 part
  const int nv = g.nv();
  std::vector<Complex> u0(nv);
  for (int iv = 0; iv < nv; ++iv) u0[iv] = -Complex(0.0, g.eta_of(iv)) * terms.phi(0, iv);
  if (!shear.trivial) {
    auto dphi = Profile1D::from_coeffs(u0, g.lv());
    std::vector<double> prod(dphi.samples().begin(), dphi.samples().end());
    const auto am1 = shear.a_minus_1.samples();
    for (int iv = 0; iv < nv; ++iv) prod[iv] *= 1.0 + am1[iv];
    auto p = Profile1D(std::move(prod), g.lv());
    u0.assign(p.coeffs().begin(), p.coeffs().end());

    // grad_t f = (d_z f, a d^L_v f), measured in frame variables
    SpectralField dvf(g);
    for (int iz = 0; iz < g.nz(); ++iz) {
      const int k = g.k_of(iz);
      for (int iv = 0; iv < nv; ++iv) {
        dvf(iz, iv) = Complex(0.0, g.eta_of(iv) - k * t) * f(iz, iv);
        grad += static_cast<double>(k) * k * std::norm(f(iz, iv));
      }
    }
    Transform fft(g);
    auto phys = fft.inverse(dvf);
    double sum = 0.0;
    for (int iz = 0; iz < g.nz(); ++iz) {
      for (int iv = 0; iv < nv; ++iv) {
        const double x = (1.0 + am1[iv]) * phys(iz, iv);
        sum += x * x;
      }
    }
    grad += sum / static_cast<double>(g.size());
  }
  double u2 = 0.0, du2 = 0.0, flux = 0.0;
  for (int iv = 0; iv < nv; ++iv) {
    const double eta = g.eta_of(iv);
    u2 += std::norm(u0[iv]);
    du2 += eta * eta * std::norm(u0[iv]);
    if (eta != 0.0 && (frame == Frame::couette || shear.trivial)) {
      // d_t u_0 = -i T_0 / eta - nu eta^2 u_0
      flux += (std::conj(u0[iv]) * (-Complex(0.0, 1.0) * terms.transport(0, iv) / eta)).real();
    }
  }
  d.u0_L2 = std::sqrt(u2);
  d.du0_L2 = std::sqrt(du2);
  d.zero_flux = flux;
  d.grad_omega = std::sqrt(grad);
  d.u0v_max = 0.0;
  return d;
}

namespace {

// derivative of y at every sample time from a (up to) 7-point stencil
std::vector<double> stencil_derivative(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  const std::size_t width = std::min<std::size_t>(7, n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = i >= width / 2 ? i - width / 2 : 0;
    if (lo + width > n) lo = n - width;
    auto w = derivative_weights(t[i], t.subspan(lo, width));
    double acc = 0.0;
    for (std::size_t j = 0; j < width; ++j) acc += w[j] * y[lo + j];
    out[i] = acc;
  }
  return out;
}

}  // namespace

BudgetReport budget_residual(std::span<const DiagnosticFrame> frames) {
  if (frames.size() < 2) throw StructuralError("energy budget needs at least two frames");
  std::vector<double> t, e;
  for (const auto& f : frames) {
    t.push_back(f.t);
    e.push_back(f.E_A);
  }
  const auto de = stencil_derivative(t, e);
  BudgetReport r;
  double emax = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    const double res = 0.5 * de[i] + f.D_visc + f.D_ghost + f.transport_in - f.source_in -
                       f.dissipation_error_in;
    r.residual.push_back(res);
    r.max_abs = std::max(r.max_abs, std::abs(res));
    emax = std::max(emax, f.E_A);
  }
  r.normalized = emax > 0.0 ? r.max_abs / emax : 0.0;
  return r;
}

BudgetReport zero_mode_budget(std::span<const DiagnosticFrame> frames, double nu) {
  if (frames.size() < 2) throw StructuralError("zero-mode budget needs at least two frames");
  std::vector<double> t, e;
  for (const auto& f : frames) {
    t.push_back(f.t);
    e.push_back(f.u0_L2 * f.u0_L2);
  }
  const auto de = stencil_derivative(t, e);
  BudgetReport r;
  double emax = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    const double res = 0.5 * de[i] + nu * f.du0_L2 * f.du0_L2 - f.zero_flux;
    r.residual.push_back(res);
    r.max_abs = std::max(r.max_abs, std::abs(res));
    emax = std::max(emax, e[i]);
  }
  r.normalized = emax > 0.0 ? r.max_abs / emax : 0.0;
  return r;
}

double time_to_e_fold(std::span<const double> t, std::span<const double> y) {
  if (t.empty() || y[0] <= 0.0) return NAN;
  const double target = std::log(y[0]) - 1.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (y[i] <= 0.0) return t[i];
    const double li = std::log(y[i]);
    if (li <= target) {
      const double lp = std::log(y[i - 1]);
      return t[i - 1] + (t[i] - t[i - 1]) * (lp - target) / (lp - li);
    }
  }
  return NAN;
}

RateFit fit_enhanced_dissipation(std::span<const double> t, std::span<const double> nz_l2, double nu,
                                 double t_critical) {
  if (!(nu > 0.0)) throw ValidationError("enhanced dissipation fit needs nu > 0");
  if (t.size() != nz_l2.size() || t.empty()) throw StructuralError("series length mismatch");
  if (nz_l2[0] == 0.0) throw ValidationError("no nonzero-mode content to fit");
  RateFit fit;
  fit.t_enhanced = std::pow(nu, -1.0 / 3.0);
  fit.t_heat = std::pow(nu, -0.5);
  if (t.back() < 3.0 * fit.t_enhanced * (1.0 - 1e-9)) {
    throw ValidationError("fit window underresolved: run shorter than 3 nu^{-1/3}");
  }
  fit.t_e = time_to_e_fold(t, nz_l2);

  const double t0 = std::max(t_critical, 0.0);
  fit.window_start = t0 + 0.5 * fit.t_enhanced;
  std::vector<double> xs, ys;
  const double y0 = nz_l2[0];
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < fit.window_start) continue;
    if (nz_l2[i] <= 1e-10 * y0) break;
    const double s = t[i] - t0;
    xs.push_back(s * s * s);
    ys.push_back(std::log(nz_l2[i] / y0));
    fit.window_end = t[i];
  }
  if (xs.size() < 4) throw ValidationError("fit window underresolved: fewer than 4 samples");
  const auto lf = fit_line(xs, ys);
  fit.c = -lf.slope / nu;
  fit.intercept = lf.intercept;
  fit.residual = lf.residual;
  fit.points = lf.points;
  return fit;
}

namespace {

nlohmann::json num(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

std::string RateFit::to_json() const {
  nlohmann::json j{{"window", {window_start, window_end}},
                   {"c", num(c)},
                   {"intercept", num(intercept)},
                   {"residual", num(residual)},
                   {"points", points},
                   {"t_e", num(t_e)},
                   {"t_enhanced", num(t_enhanced)},
                   {"t_heat", num(t_heat)}};
  return j.dump(2);
}

BootstrapReport check_bootstrap(std::span<const DiagnosticFrame> frames, double eps, double nu) {
  BootstrapReport r;
  r.eps = eps;
  r.nu = nu;
  if (frames.empty()) return r;
  double visc = 0.0, ghost = 0.0, du0 = 0.0, fnz = 0.0;
  double worst = 0.0;
  const double g0 = frames.front().grad_omega;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    if (i > 0) {
      const auto& p = frames[i - 1];
      const double h = f.t - p.t;
      visc += 0.5 * h * (p.D_visc + f.D_visc);
      ghost += 0.5 * h * (p.D_ghost + f.D_ghost);
      du0 += 0.5 * h * nu * (p.du0_L2 * p.du0_L2 + f.du0_L2 * f.du0_L2);
      fnz += 0.5 * h * (p.nz_HN * p.nz_HN + f.nz_HN * f.nz_HN);
    }
    r.sup_Af = std::max(r.sup_Af, std::sqrt(f.E_A));
    r.sup_u0 = std::max(r.sup_u0, f.u0_L2);
    if (g0 > 0.0) r.transient_growth = std::max(r.transient_growth, f.grad_omega / g0);
    const double ga = r.sup_Af + std::sqrt(visc) + std::sqrt(ghost);
    const double gb = r.sup_u0 + std::sqrt(du0);
    worst = std::max({worst, ga, gb});
    if (std::isnan(r.first_violation_t) && std::max(ga, gb) > 8.0 * eps) r.first_violation_t = f.t;
  }
  r.visc_L2 = std::sqrt(visc);
  r.ghost_L2 = std::sqrt(ghost);
  r.du0_L2 = std::sqrt(du0);
  r.group_a = r.sup_Af + r.visc_L2 + r.ghost_L2;
  r.group_b = r.sup_u0 + r.du0_L2;
  r.fnz_L2HN = std::sqrt(fnz);
  r.K = (eps > 0.0 && nu > 0.0) ? r.fnz_L2HN / (eps * std::pow(nu, -1.0 / 6.0)) : 0.0;
  if (worst <= 4.0 * eps) {
    r.classification = "strong";
  } else if (worst <= 8.0 * eps) {
    r.classification = "stable";
  } else {
    r.classification = "violated";
  }
  return r;
}

std::string BootstrapReport::to_json() const {
  nlohmann::json j{{"classification", classification},
                   {"first_violation_t", num(first_violation_t)},
                   {"eps", eps},
                   {"nu", nu},
                   {"sup_Af", sup_Af},
                   {"visc_L2", visc_L2},
                   {"ghost_L2", ghost_L2},
                   {"sup_u0", sup_u0},
                   {"du0_L2", du0_L2},
                   {"group_a", group_a},
                   {"group_b", group_b},
                   {"fnz_L2HN", fnz_L2HN},
                   {"K", K},
                   {"transient_growth", transient_growth}};
  return j.dump(2);
}

std::string frames_to_csv(std::span<const DiagnosticFrame> frames, int decimate) {
  std::string out =
      "t,E_A,D_visc,D_ghost,nz_HN,z_HN,psi_nz,u0_L2,budget_residual,nz_L2,du0_L2,grad_omega\n";
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (i % static_cast<std::size_t>(decimate) != 0 && i + 1 != frames.size()) continue;
    const auto& f = frames[i];
    const double vals[] = {f.t,      f.E_A,   f.D_visc,          f.D_ghost,
                           f.nz_HN,  f.z_HN,  f.psi_nz,          f.u0_L2,
                           f.budget_residual, f.nz_L2, f.du0_L2, f.grad_omega};
    for (std::size_t c = 0; c < std::size(vals); ++c) {
      if (c) out += ',';
      out += format_double(vals[c]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace shearlab
