#include "shearlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shearlab/errors.hpp"
#include "shearlab/kelvin.hpp"
#include "shearlab/operators.hpp"

namespace shearlab {

namespace {

constexpr Complex kI{0.0, 1.0};

// moving-frame multipliers ik and i(eta - k t)
SpectralField dz(const SpectralField& f) {
  const auto& g = f.grid();
  SpectralField out(g);
  for (int iz = 0; iz < g.nz(); ++iz) {
    const Complex m = kI * static_cast<double>(g.k_of(iz));
    for (int iv = 0; iv < g.nv(); ++iv) out(iz, iv) = m * f(iz, iv);
  }
  return out;
}

SpectralField dv_l(const SpectralField& f, double t, int order) {
  const auto& g = f.grid();
  SpectralField out(g);
  for (int iz = 0; iz < g.nz(); ++iz) {
    const int k = g.k_of(iz);
    for (int iv = 0; iv < g.nv(); ++iv) {
      const double s = g.eta_of(iv) - k * t;
      out(iz, iv) = (order == 1 ? kI * s : Complex(-s * s)) * f(iz, iv);
    }
  }
  return out;
}

struct Coefficients {
  std::vector<double> a;       // a(v)
  std::vector<double> a2m1;    // a^2 - 1
  std::vector<double> b;       // b(v)
};

Coefficients coefficients_of(const ShearState& s) {
  const auto am1 = s.a_minus_1.samples();
  const auto b = s.b.samples();
  Coefficients c;
  c.a.resize(am1.size());
  c.a2m1.resize(am1.size());
  c.b.assign(b.begin(), b.end());
  for (std::size_t i = 0; i < am1.size(); ++i) {
    c.a[i] = 1.0 + am1[i];
    c.a2m1[i] = am1[i] * (2.0 + am1[i]);
  }
  return c;
}

// R phi = (a^2 - 1) d^L_vv phi + b d^L_v phi, dealiased
SpectralField remainder(const SpectralField& phi, const Coefficients& c, double t, Transform& fft) {
  const auto& g = phi.grid();
  PhysicalField pvv = fft.inverse(dv_l(phi, t, 2));
  PhysicalField pv = fft.inverse(dv_l(phi, t, 1));
  for (int iz = 0; iz < g.nz(); ++iz) {
    for (int iv = 0; iv < g.nv(); ++iv) {
      pvv(iz, iv) = c.a2m1[iv] * pvv(iz, iv) + c.b[iv] * pv(iz, iv);
    }
  }
  auto out = fft.forward(pvv);
  dealias_in_place(out);
  return out;
}

double norm_without_mean(const SpectralField& f) {
  double sum = 0.0;
  auto c = f.coeffs();
  for (std::size_t i = 1; i < c.size(); ++i) sum += std::norm(c[i]);
  return std::sqrt(sum);
}

}  // namespace

const char* frame_name(Frame f) { return f == Frame::couette ? "couette" : "general"; }

Frame parse_frame(const std::string& s) {
  if (s == "couette") return Frame::couette;
  if (s == "general") return Frame::general;
  throw ValidationError("unknown frame " + s);
}

Scheme parse_scheme(const std::string& s) {
  if (s == "rk4") return Scheme::rk4;
  if (s == "heun") return Scheme::heun;
  throw ValidationError("unknown time scheme " + s);
}

void SolverConfig::validate() const {
  if (!(nu >= 0.0 && nu <= 1.0)) throw ValidationError("nu must lie in [0, 1]");
  if (!(regularity > 1.0)) throw ValidationError("N must be > 1");
  if (!(t_final > 0.0)) throw ValidationError("T_final must be positive");
  if (dt < 0.0 || !(dt_max > 0.0)) throw ValidationError("dt must be positive");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ValidationError("cfl must lie in (0, 1]");
  if (!(elliptic_tol > 0.0 && elliptic_tol <= 1e-6)) {
    throw ValidationError("elliptic tolerance must lie in (0, 1e-6]");
  }
  if (elliptic_max_sweeps < 1 || shear_refresh < 1) throw ValidationError("bad solver counts");
}

SpectralField RhsTerms::combined() const {
  SpectralField out = source;
  out -= transport;
  out += dissipation_error;
  return out;
}

SpectralField solve_poisson_t(const SpectralField& f, const ShearState& shear, double t, double tol,
                              int max_sweeps, Transform& fft, EllipticStats* stats) {
  SpectralField phi = inv_laplace_L(f, t);
  if (stats) {
    ++stats->solves;
    stats->last_sweeps = 1;
    stats->last_residual = 0.0;
    stats->max_sweeps = std::max(stats->max_sweeps, 1);
  }
  if (shear.trivial) return phi;
  const double fnorm = norm_without_mean(f);
  if (fnorm == 0.0) return phi;

  const Coefficients c = coefficients_of(shear);
  double prev = 0.0;
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    SpectralField rphi = remainder(phi, c, t, fft);
    // Delta_t phi - f on the modes other than (0,0)
    SpectralField res = laplace_L(phi, t);
    res += rphi;
    res -= f;
    const double r = norm_without_mean(res) / fnorm;
    if (stats) {
      stats->last_sweeps = sweep;
      stats->last_residual = r;
      stats->max_sweeps = std::max(stats->max_sweeps, sweep);
      if (sweep > 1 && prev > 0.0 && prev > 1e3 * tol) {
        stats->max_contraction = std::max(stats->max_contraction, r / prev);
      }
    }
    if (r <= tol) return phi;
    prev = r;
    SpectralField rhs = f;
    rhs -= rphi;
    phi = inv_laplace_L(rhs, t);
  }
  throw EllipticError("delta too large for elliptic solve");
}

void apply_integrating_factor(SpectralField& f, double nu, double t0, double t1) {
  if (nu == 0.0 || t0 == t1) return;
  const auto& g = f.grid();
  for (int iz = 0; iz < g.nz(); ++iz) {
    const int k = g.k_of(iz);
    for (int iv = 0; iv < g.nv(); ++iv) {
      f(iz, iv) *= std::exp(-viscous_exponent(k, g.eta_of(iv), nu, t0, t1));
    }
  }
}

struct Solver::Impl {
  Transform fft;
  std::optional<ShearProfile> profile;
  ShearState shear;
  Coefficients coeffs;
  EllipticStats stats;
  long cfl_shrinks = 0;
  double max_a2m1 = 0.0;

  explicit Impl(const FrequencyGrid& g) : fft(g) {}
};

Solver::Solver(SolverConfig config, std::optional<ShearProfile> shear)
    : config_(std::move(config)), impl_(std::make_unique<Impl>(config_.grid)) {
  config_.validate();
  if (shear && shear->g.size() != config_.grid.nv()) {
    throw StructuralError("shear profile must be sampled on the v-grid");
  }
  if (shear && shear->g.lv() != config_.grid.lv()) {
    throw StructuralError("shear profile period differs from the grid");
  }
  if (config_.frame == Frame::couette && shear && !shear->is_couette()) {
    throw ValidationError("a non-Couette shear needs the general frame");
  }
  impl_->profile = std::move(shear);
  refresh_shear(0.0);
}

Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

void Solver::refresh_shear(double t) {
  const int nv = config_.grid.nv();
  const double lv = config_.grid.lv();
  if (config_.frame == Frame::general && impl_->profile) {
    impl_->shear = make_shear_state(*impl_->profile, config_.nu, t);
  } else {
    impl_->shear = make_shear_state(couette_profile(nv, lv, config_.regularity + 2.0), config_.nu, t);
  }
  impl_->coeffs = coefficients_of(impl_->shear);
  impl_->max_a2m1 = 0.0;
  for (double x : impl_->coeffs.a2m1) impl_->max_a2m1 = std::max(impl_->max_a2m1, std::abs(x));
}

const ShearState& Solver::shear_state() const { return impl_->shear; }
bool Solver::has_shear() const { return !impl_->shear.trivial; }
const ShearProfile* Solver::shear_profile() const {
  return impl_->profile ? &*impl_->profile : nullptr;
}
const EllipticStats& Solver::elliptic_stats() const { return impl_->stats; }
long Solver::cfl_shrinks() const { return impl_->cfl_shrinks; }
Transform& Solver::transform() { return impl_->fft; }

RunState Solver::initial_state(const SpectralField& f0) {
  require_same_grid(f0.grid(), config_.grid);
  RunState s(config_.grid);
  s.f = f0;
  s.t = 0.0;
  s.initial_max = f0.max_abs();
  s.phi = stream_function(0.0, f0);
  return s;
}

SpectralField Solver::stream_function(double t, const SpectralField& f) {
  if (impl_->shear.trivial) return inv_laplace_L(f, t);
  return solve_poisson_t(f, impl_->shear, t, config_.elliptic_tol, config_.elliptic_max_sweeps,
                         impl_->fft, &impl_->stats);
}

RhsTerms Solver::terms(double t, const SpectralField& f) {
  const auto& g = config_.grid;
  RhsTerms out{stream_function(t, f), SpectralField(g), SpectralField(g), SpectralField(g)};
  const bool sheared = !impl_->shear.trivial;
  const auto& c = impl_->coeffs;
  auto& fft = impl_->fft;

  if (!config_.nonlinear && !sheared) return out;

  PhysicalField dzphi = fft.inverse(dz(out.phi));
  if (config_.nonlinear) {
    PhysicalField dvphi = fft.inverse(dv_l(out.phi, t, 1));
    PhysicalField dzf = fft.inverse(dz(f));
    PhysicalField dvf = fft.inverse(dv_l(f, t, 1));
    PhysicalField tr(g);
    for (int iz = 0; iz < g.nz(); ++iz) {
      for (int iv = 0; iv < g.nv(); ++iv) {
        const double q = dzphi(iz, iv) * dvf(iz, iv) - dvphi(iz, iv) * dzf(iz, iv);
        tr(iz, iv) = sheared ? c.a[iv] * q : q;
      }
    }
    out.transport = fft.forward(tr);
    dealias_in_place(out.transport);
  }
  if (sheared) {
    PhysicalField src(g);
    PhysicalField de = fft.inverse(dv_l(f, t, 2));
    for (int iz = 0; iz < g.nz(); ++iz) {
      for (int iv = 0; iv < g.nv(); ++iv) {
        src(iz, iv) = c.b[iv] * dzphi(iz, iv);
        de(iz, iv) *= config_.nu * c.a2m1[iv];
      }
    }
    out.source = fft.forward(src);
    dealias_in_place(out.source);
    out.dissipation_error = fft.forward(de);
    dealias_in_place(out.dissipation_error);
  }
  return out;
}

SpectralField Solver::rhs(double t, const SpectralField& f) { return terms(t, f).combined(); }

double Solver::resolution_horizon() const {
  const auto& g = config_.grid;
  return 0.8 * g.eta_cut() / std::max(1, g.k_cut());
}

void Solver::check_resolution(const RunState& state) const {
  if (state.t <= resolution_horizon()) return;
  const auto& g = config_.grid;
  const double limit = config_.resolution_floor * state.initial_max;
  for (int iz = 0; iz < g.nz(); ++iz) {
    const int k = g.k_of(iz);
    if (k == 0) continue;
    for (int iv = 0; iv < g.nv(); ++iv) {
      if (std::abs(g.eta_of(iv) - k * state.t) > g.eta_cut() && std::abs(state.f(iz, iv)) > limit) {
        throw ResolutionError("shear-resolution exhausted at t = " + std::to_string(state.t));
      }
    }
  }
}

double Solver::next_dt(const RunState& state) {
  const auto& g = config_.grid;
  const double remaining = config_.t_final - state.t;
  double dt = config_.dt > 0.0 ? config_.dt : config_.dt_max;
  double bound = std::numeric_limits<double>::infinity();

  if (config_.nonlinear) {
    const double t = state.t;
    auto& fft = impl_->fft;
    PhysicalField dzphi = fft.inverse(dz(state.phi));
    PhysicalField dvphi = fft.inverse(dv_l(state.phi, t, 1));
    const auto& a = impl_->coeffs.a;
    double umax_z = 0.0, umax_v = 0.0;
    for (int iz = 0; iz < g.nz(); ++iz) {
      for (int iv = 0; iv < g.nv(); ++iv) {
        const double uz = -a[iv] * (dvphi(iz, iv) + t * dzphi(iz, iv));
        const double uv = a[iv] * dzphi(iz, iv);
        umax_z = std::max(umax_z, std::abs(uz));
        umax_v = std::max(umax_v, std::abs(uv));
      }
    }
    if (umax_z > 0.0) bound = std::min(bound, config_.cfl * g.dz() / umax_z);
    if (umax_v > 0.0) bound = std::min(bound, config_.cfl * g.dv() / umax_v);
  }
  if (!impl_->shear.trivial && config_.nu > 0.0 && impl_->max_a2m1 > 0.0) {
    const double s = g.eta_cut() + g.k_cut() * (state.t + dt);
    bound = std::min(bound, 0.5 / (config_.nu * impl_->max_a2m1 * s * s));
  }
  if (bound < dt) {
    dt = bound;
    if (config_.dt > 0.0) ++impl_->cfl_shrinks;
  }
  // do not leave a sliver at the end
  if (remaining <= dt * (1.0 + 1e-9)) return remaining;
  return dt;
}

void Solver::step(RunState& state, double dt, const SpectralField* k1_in) {
  if (!(dt > 0.0)) throw StructuralError("step size must be positive");
  const double t = state.t;
  const double nu = config_.nu;
  const double th = t + 0.5 * dt;
  const double t1 = t + dt;
  const SpectralField& f = state.f;

  SpectralField k1 = k1_in ? *k1_in : rhs(t, f);
  SpectralField next(config_.grid);

  if (config_.scheme == Scheme::rk4) {
    // Lawson RK4 on g = E(t -> s)^{-1} f
    SpectralField y2 = f;
    y2.axpy(0.5 * dt, k1);
    apply_integrating_factor(y2, nu, t, th);
    SpectralField k2 = rhs(th, y2);

    SpectralField ef = f;
    apply_integrating_factor(ef, nu, t, th);  // E_a f
    SpectralField y3 = ef;
    y3.axpy(0.5 * dt, k2);
    SpectralField k3 = rhs(th, y3);

    SpectralField ek3 = k3;
    apply_integrating_factor(ek3, nu, th, t1);  // E_b k3
    SpectralField y4 = ef;
    apply_integrating_factor(y4, nu, th, t1);   // E f
    SpectralField ff = y4;
    y4.axpy(dt, ek3);
    SpectralField k4 = rhs(t1, y4);

    SpectralField ek23 = k2;
    apply_integrating_factor(ek23, nu, th, t1);
    ek23 += ek3;  // E_b (k2 + k3)
    SpectralField ek1 = k1;
    apply_integrating_factor(ek1, nu, t, th);
    apply_integrating_factor(ek1, nu, th, t1);

    next = ff;
    next.axpy(dt / 6.0, ek1);
    next.axpy(dt / 3.0, ek23);
    next.axpy(dt / 6.0, k4);
  } else {
    SpectralField pred = f;
    pred.axpy(dt, k1);
    apply_integrating_factor(pred, nu, t, th);
    apply_integrating_factor(pred, nu, th, t1);
    SpectralField k2 = rhs(t1, pred);
    next = f;
    next.axpy(0.5 * dt, k1);
    apply_integrating_factor(next, nu, t, th);
    apply_integrating_factor(next, nu, th, t1);
    next.axpy(0.5 * dt, k2);
  }

  if (!next.all_finite()) {
    throw NumericalError("non-finite coefficients at t = " + std::to_string(t1));
  }
  state.f = std::move(next);
  state.t = t1;
  state.dt_last = dt;
  ++state.steps;
  if (config_.frame == Frame::general && impl_->profile && state.steps % config_.shear_refresh == 0) {
    refresh_shear(state.t);
  }
  state.phi = stream_function(state.t, state.f);
  check_resolution(state);
}

void prevalidate_resolution(const FrequencyGrid& grid, double nu, double t_final) {
  const double floor_exponent = std::log(1e14);
  for (int k = 1; k <= grid.k_cut(); ++k) {
    const double t_exit = 0.8 * grid.eta_cut() / k;
    if (t_final <= t_exit) continue;
    if (nu > 0.0 && viscous_exponent(k, 0.0, nu, 0.0, t_exit) >= floor_exponent) continue;
    throw ResolutionError("shear-resolution exhausted: mode k = " + std::to_string(k) +
                          " leaves the band at t = " + std::to_string(t_exit) + " before T_final");
  }
}

}  // namespace shearlab
