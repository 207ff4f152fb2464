#include <doctest.h>

#include <cmath>

#include "shearlab/diagnostics.hpp"
#include "shearlab/errors.hpp"
#include "shearlab/kelvin.hpp"
#include "shearlab/operators.hpp"
#include "shearlab/run.hpp"
#include "shearlab/transform.hpp"
#include "support/oracles.hpp"

using namespace shearlab;
using doctest::Approx;

namespace {

RunConfig small_run(double nu, double eps, double t_final) {
  RunConfig c;
  c.grid = {16, 128, 16.0};
  c.physics.nu = nu;
  c.data.eps = eps;
  c.data.width = 1.0;
  c.time.t_final = t_final;
  c.output.checkpoint_interval = 0.0;
  return c;
}

DiagnosticFrame frame_of(const SpectralField& f, double t, double nu, double n) {
  const auto& g = f.grid();
  RhsTerms terms{inv_laplace_L(f, t), SpectralField(g), SpectralField(g), SpectralField(g)};
  MultiplierState ms(g, {nu, n}, t);
  const auto sh = make_shear_state(couette_profile(g.nv(), g.lv(), n + 2), nu, t);
  return compute_frame(t, f, terms, ms, sh, nu, Frame::couette);
}

}  // namespace

TEST_CASE("frame of the zero field") {
  const FrequencyGrid g(16, 64, 2.0 * M_PI);
  const auto d = frame_of(SpectralField(g), 1.0, 0.1, 2.0);
  CHECK(d.E_A == 0.0);
  CHECK(d.D_visc == 0.0);
  CHECK(d.D_ghost == 0.0);
  CHECK(d.nz_HN == 0.0);
  CHECK(d.u0_L2 == 0.0);
  CHECK(d.transport_in == 0.0);
}

TEST_CASE("frame values at t = 0") {
  const FrequencyGrid g(16, 64, 2.0 * M_PI);
  SpectralField one(g);
  one.mode(1, 0) = 1.0;
  // (-dM M)(0,1,0) = 2 and <D>^{2N} = 2^N
  CHECK(frame_of(one, 0.0, 1.0, 2.0).D_ghost == Approx(8.0).epsilon(1e-15));
  auto f = oracle::random_field(g, 4);
  const auto d = frame_of(f, 0.0, 0.1, 2.0);
  CHECK(d.E_A == Approx(std::pow(sobolev_norm(f, 2.0), 2)).epsilon(1e-14));
  auto [zero, nonzero] = project_modes(f);
  CHECK(d.nz_HN == Approx(sobolev_norm(nonzero, 2.0)).epsilon(1e-14));
  CHECK(d.z_HN == Approx(sobolev_norm(zero, 2.0)).epsilon(1e-14));
}

TEST_CASE("norm sandwich, interpolation constant and Parseval") {
  const FrequencyGrid g(16, 64, 16.0);
  auto f = oracle::random_field(g, 6);
  const double nu = 1e-2;
  const auto rep = verify_conditions(g, nu, 2.0, condition_time_ladder(nu, 12));
  for (double t : {0.0, 2.0, 9.0, 30.0}) {
    const auto d = frame_of(f, t, nu, 2.0);
    const double hn = sobolev_norm(f, 2.0);
    CHECK(std::sqrt(d.E_A) <= hn * (1 + 1e-14));
    CHECK(std::sqrt(d.E_A) >= kMultiplierFloor * hn);
    CHECK(d.interp_constant <= rep.check("e").constant * (1 + 1e-12));

    Transform fft(g);
    const auto phys = fft.inverse(apply_A(f, MultiplierState(g, {nu, 2.0}, t)));
    double q = 0.0;
    for (double x : phys.values) q += x * x;
    q /= static_cast<double>(phys.values.size());
    CHECK(q == Approx(d.E_A).epsilon(1e-10));
  }
}

TEST_CASE("energy budget closes on linear single mode runs") {
  auto cfg = small_run(1e-2, 1e-3, 5.0);
  cfg.data.kind = "single_mode";
  cfg.physics.nonlinear = false;
  cfg.time.dt_max = 0.01;
  const auto r = simulate(cfg);
  REQUIRE(r.exit_code == 0);
  CHECK(r.budget_normalized <= 1e-8);
}

TEST_CASE("budget of the zero field") {
  std::vector<DiagnosticFrame> frames(3);
  for (int i = 0; i < 3; ++i) frames[i].t = i;
  CHECK(budget_residual(frames).max_abs == 0.0);
  CHECK_THROWS_AS(budget_residual(std::span(frames).first(1)), StructuralError);
}

TEST_CASE("zero-mode energy transfer in the Couette frame") {
  auto cfg = small_run(1e-2, 0.5, 2.5);
  cfg.time.dt_max = 0.01;
  const auto r = simulate(cfg);
  REQUIRE(r.exit_code == 0);
  const auto zb = zero_mode_budget(r.frames, cfg.physics.nu);
  double flux = 0.0;
  for (const auto& f : r.frames) flux = std::max(flux, std::abs(f.zero_flux));
  MESSAGE("zero-mode residual " << zb.max_abs << " vs max flux " << flux);
  CHECK(flux > 0.0);
  CHECK(zb.max_abs <= 1e-6 * flux);
  for (const auto& f : r.frames) CHECK(f.u0v_max == 0.0);
}

TEST_CASE("enhanced dissipation fit") {
  SUBCASE("Kelvin single mode") {
    const double nu = 1e-4;
    std::vector<double> t, y;
    for (int i = 0; i <= 400; ++i) {
      const double s = 3.0 / std::cbrt(nu) * i / 400;
      t.push_back(s);
      y.push_back(std::abs(kelvin_evolve({1, 0.0, 1.0, nu}, s).omega_hat));
    }
    const auto fit = fit_enhanced_dissipation(t, y, nu);
    CHECK(fit.t_e == Approx(oracle::e_fold_cardano(nu)).epsilon(1e-3));
    CHECK(fit.t_e < fit.t_heat);
    CHECK(fit.t_enhanced == Approx(std::cbrt(1.0 / nu)));
    CHECK(fit.c > 0.3);
    CHECK(fit.c < 0.4);
  }
  SUBCASE("large viscosity puts both scales together") {
    const double nu = 0.1;
    CHECK(std::pow(nu, -0.5) / std::pow(nu, -1.0 / 3.0) < 2.0);
    std::vector<double> t, y;
    for (int i = 0; i <= 400; ++i) {
      const double s = 3.0 / std::cbrt(nu) * i / 400;
      t.push_back(s);
      y.push_back(std::abs(kelvin_evolve({1, 0.0, 1.0, nu}, s).omega_hat));
    }
    const auto fit = fit_enhanced_dissipation(t, y, nu);
    MESSAGE("nu = 0.1: c = " << fit.c << ", residual " << fit.residual);
    CHECK(fit.to_json().find("\"t_heat\"") != std::string::npos);
  }
  SUBCASE("rejections") {
    std::vector<double> t{0.0, 10.0, 20.0, 30.0}, zero(4, 0.0), y{1, 0.9, 0.8, 0.7};
    CHECK_THROWS_AS(fit_enhanced_dissipation(t, zero, 1e-3), ValidationError);
    CHECK_THROWS_WITH_AS(fit_enhanced_dissipation(t, y, 1e-3), "fit window underresolved: fewer than 4 samples",
                         ValidationError);
    std::vector<double> short_t{0.0, 1.0, 2.0, 3.0};
    CHECK_THROWS_AS(fit_enhanced_dissipation(short_t, y, 1e-3), ValidationError);
  }
}

TEST_CASE("bootstrap classification") {
  SUBCASE("zero data") {
    const auto r = simulate(small_run(1e-2, 0.0, 1.0));
    CHECK(r.exit_code == 0);
    CHECK(r.bootstrap.classification == "strong");
    for (const auto& f : r.frames) CHECK(f.E_A == 0.0);
  }
  SUBCASE("linear flow is invariant under rescaling") {
    auto a = small_run(1e-2, 1e-3, 2.0);
    a.physics.nonlinear = false;
    auto b = a;
    b.data.eps = 7e-3;
    const auto ra = simulate(a);
    const auto rb = simulate(b);
    CHECK(ra.bootstrap.classification == rb.bootstrap.classification);
    CHECK(rb.bootstrap.group_a == Approx(7.0 * ra.bootstrap.group_a).epsilon(1e-10));
    CHECK(rb.bootstrap.group_b == Approx(7.0 * ra.bootstrap.group_b).epsilon(1e-10));
    CHECK(rb.bootstrap.K == Approx(ra.bootstrap.K).epsilon(1e-10));
  }
  SUBCASE("thresholds") {
    std::vector<DiagnosticFrame> frames(2);
    frames[0].t = 0.0;
    frames[1].t = 1.0;
    frames[0].E_A = frames[1].E_A = 36.0;  // sup ||Af|| = 6
    CHECK(check_bootstrap(frames, 1.0, 1e-2).classification == "stable");
    CHECK(check_bootstrap(frames, 2.0, 1e-2).classification == "strong");
    frames[1].E_A = 100.0;
    const auto r = check_bootstrap(frames, 1.0, 1e-2);
    CHECK(r.classification == "violated");
    CHECK(r.first_violation_t == 1.0);
  }
  SUBCASE("small data near Couette is stable") {
    RunConfig c;
    c.grid = {16, 768, 16.0};
    c.physics.nu = 1e-2;
    c.data.eps = 0.05 * std::sqrt(1e-2);
    c.data.width = 1.0;
    c.output.checkpoint_interval = 0.0;
    const auto r = simulate(c);
    INFO(r.message);
    CHECK(r.exit_code == 0);
    CHECK(r.bootstrap.classification != "violated");
  }
}

TEST_CASE("series csv") {
  std::vector<DiagnosticFrame> frames(25);
  for (int i = 0; i < 25; ++i) frames[i].t = i;
  const auto csv = frames_to_csv(frames, 10);
  CHECK(csv.rfind("t,E_A,D_visc,D_ghost,nz_HN,z_HN,psi_nz,u0_L2,budget_residual", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4);  // 0, 10, 20, 24
}
