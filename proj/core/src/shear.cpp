#include "shearlab/shear.hpp"

#include <algorithm>
#include <boost/math/interpolators/barycentric_rational.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

#include "shearlab/errors.hpp"
#include "shearlab/fitting.hpp"
#include "shearlab/operators.hpp"

namespace shearlab {

double shear_delta(const Profile1D& g, double s) {
  return g.derivative(1).sobolev_norm(s) + g.derivative(2).sobolev_norm(s);
}

namespace {

ShearProfile finish(std::string name, Profile1D g, double s) {
  ShearProfile p;
  p.name = std::move(name);
  p.s = s;
  p.delta = shear_delta(g, s);
  p.g = std::move(g);
  return p;
}

}  // namespace

ShearProfile couette_profile(int n, double lv, double s) {
  return finish("couette", Profile1D(n, lv), s);
}

ShearProfile gauss_bump_profile(int n, double lv, double amplitude, double width, double s) {
  if (!(width > 0.0)) throw ValidationError("gauss_bump width must be positive");
  auto g = Profile1D::from_function(
      n, lv, [&](double y) { return amplitude * std::exp(-y * y / (2.0 * width * width)); });
  return finish("gauss_bump", std::move(g), s);
}

ShearProfile gauss_bump_with_delta(int n, double lv, double target_delta, double width, double s) {
  if (!(target_delta >= 0.0)) throw ValidationError("target delta must be >= 0");
  auto unit = gauss_bump_profile(n, lv, 1.0, width, s);
  auto p = gauss_bump_profile(n, lv, target_delta / unit.delta, width, s);
  return p;
}

ShearProfile tanh_defect_profile(int n, double lv, double amplitude, double width, double s) {
  if (!(width > 0.0)) throw ValidationError("tanh_defect width must be positive");
  auto g = Profile1D::from_function(n, lv, [&](double y) {
    const double c = std::cosh(y / width);
    return amplitude * y / (c * c);
  });
  return finish("tanh_defect", std::move(g), s);
}

ShearProfile table_profile(const std::string& path, int n, double lv, double s) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open shear table " + path);
  std::vector<double> ys, gs;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double y, g;
    if (!(ls >> y)) continue;
    if (!(ls >> g)) throw ValidationError("malformed shear table line: " + line);
    if (!ys.empty() && y <= ys.back()) throw ValidationError("shear table must be increasing in y");
    ys.push_back(y);
    gs.push_back(g);
  }
  if (ys.size() < 4) throw ValidationError("shear table needs at least 4 rows");
  const double lo = ys.front();
  const double hi = ys.back();
  boost::math::barycentric_rational<double> interp(ys.data(), gs.data(), ys.size(), 3);
  auto g = Profile1D::from_function(n, lv, [&](double y) {
    return (y < lo || y > hi) ? 0.0 : interp(y);
  });
  return finish("table", std::move(g), s);
}

bool validate_profile(const ShearProfile& profile, double delta_max) {
  if (profile.delta > delta_max) {
    throw ValidationError("shear delta " + std::to_string(profile.delta) + " exceeds delta_max " +
                          std::to_string(delta_max));
  }
  if (profile.g.sup_norm() == 0.0) return false;
  return check_spillover(spillover_fraction_1d(profile.g.samples(), profile.g.lv()),
                         "shear perturbation");
}

ShearY evolve_shear(const ShearProfile& profile, double nu, double t) {
  if (t < 0.0) throw ValidationError("shear time must be >= 0");
  ShearY y;
  y.t = t;
  y.g = (t == 0.0 || nu == 0.0) ? profile.g : profile.g.heat_evolved(nu, t);
  y.gp = y.g.derivative(1);
  y.gpp = y.g.derivative(2);
  return y;
}

InverseMap invert_map(const ShearY& y_side, double tol, int max_iterations) {
  const Profile1D& g = y_side.g;
  const int n = g.size();
  const double lv = g.lv();
  InverseMap out{Profile1D(n, lv), 0, 0.0, 0.0};
  if (g.sup_norm() == 0.0) return out;
  if (y_side.gp.sup_norm() >= 0.5) throw InversionError("delta too large for inversion");

  std::vector<double> beta(n, 0.0);
  std::vector<double> pts(n);
  for (int it = 1; it <= max_iterations; ++it) {
    for (int i = 0; i < n; ++i) pts[i] = g.v_at(i) + beta[i];
    auto alpha = g.evaluate(pts);
    double update = 0.0;
    for (int i = 0; i < n; ++i) {
      const double next = -alpha[i];
      update = std::max(update, std::abs(next - beta[i]));
      beta[i] = next;
    }
    out.iterations = it;
    out.last_update = update;
    if (update < tol) break;
  }
  if (out.last_update >= tol) throw InversionError("inverse map did not converge");

  for (int i = 0; i < n; ++i) pts[i] = g.v_at(i) + beta[i];
  auto alpha = g.evaluate(pts);
  double res = 0.0;
  for (int i = 0; i < n; ++i) res = std::max(res, std::abs(beta[i] + alpha[i]));
  out.residual = res;
  out.beta = Profile1D(std::move(beta), lv);
  return out;
}

std::pair<Profile1D, Profile1D> shear_coefficients(const ShearY& y_side, const InverseMap& map) {
  const int n = y_side.g.size();
  const double lv = y_side.g.lv();
  const double dv = lv / n;
  std::vector<double> pts(n);
  for (int i = 0; i < n; ++i) {
    const double v = y_side.g.v_at(i);
    pts[i] = v + map.beta.samples()[i];
    if (pts[i] < -0.5 * lv - dv || pts[i] > 0.5 * lv + dv) {
      throw InversionError("coordinate map leaves the box");
    }
  }
  return {Profile1D(y_side.gp.evaluate(pts), lv), Profile1D(y_side.gpp.evaluate(pts), lv)};
}

ShearState make_shear_state(const ShearProfile& profile, double nu, double t) {
  ShearState st;
  st.t = t;
  st.y_side = evolve_shear(profile, nu, t);
  const int n = profile.g.size();
  const double lv = profile.g.lv();
  st.trivial = st.y_side.g.sup_norm() == 0.0;
  if (st.trivial) {
    st.map = InverseMap{Profile1D(n, lv), 0, 0.0, 0.0};
    st.a_minus_1 = Profile1D(n, lv);
    st.b = Profile1D(n, lv);
    return st;
  }
  st.map = invert_map(st.y_side);
  auto [am1, b] = shear_coefficients(st.y_side, st.map);
  st.a_minus_1 = std::move(am1);
  st.b = std::move(b);
  return st;
}

double round_trip_error(const ShearY& y_side, const InverseMap& map) {
  const int n = y_side.g.size();
  std::vector<double> ys(n);
  for (int i = 0; i < n; ++i) ys[i] = y_side.g.v_at(i) + map.beta.samples()[i];
  auto g = y_side.g.evaluate(ys);
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    err = std::max(err, std::abs(ys[i] + g[i] - y_side.g.v_at(i)));
  }
  return err;
}

double chain_rule_residual(const ShearState& state) {
  const Profile1D& am1 = state.a_minus_1;
  const int n = am1.size();
  std::vector<double> one(n, 1.0);
  Profile1D a = am1 + Profile1D(std::move(one), am1.lv());
  return (state.b - a * am1.derivative(1)).l2_norm();
}

Profile1D compose(const Profile1D& f, const Profile1D& g) {
  if (f.size() != g.size() || f.lv() != g.lv()) throw StructuralError("compose needs matching profiles");
  const int n = f.size();
  std::vector<double> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = f.v_at(i) + g.samples()[i];
  return Profile1D(f.evaluate(pts), f.lv());
}

HeatBudget heat_norm_budget(const Profile1D& g, double nu, double t_final, double s,
                            int ladder_points) {
  if (!(nu > 0.0) || !(t_final > 0.0)) throw ValidationError("heat budget needs nu > 0, T > 0");
  HeatBudget hb;
  hb.nu = nu;
  hb.t_final = t_final;
  hb.s = s;
  const Profile1D gp = g.derivative(1);
  const Profile1D gpp = g.derivative(2);
  hb.up0 = gp.sobolev_norm(s);
  hb.upp0 = gpp.sobolev_norm(s);
  hb.delta = hb.up0 + hb.upp0;

  // per-mode weights so that ||Ubar''(t)||^2_{H^s} = sum w_i exp(-2 nu eta_i^2 t)
  const int n = g.size();
  std::vector<double> w(n), rate(n);
  for (int i = 0; i < n; ++i) {
    const double eta = g.eta_of(i);
    w[i] = std::pow(1.0 + eta * eta, s) * std::norm(gpp.coeffs()[i]);
    rate[i] = 2.0 * nu * eta * eta;
  }
  auto upp_sq = [&](double t) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      if (w[i] != 0.0) sum += w[i] * std::exp(-rate[i] * t);
    }
    return sum;
  };

  hb.times = geometric_ladder(t_final * 1e-8, t_final, ladder_points, true);
  double prev_up = INFINITY, prev_upp = INFINITY;
  for (double t : hb.times) {
    const double up = gp.heat_evolved(nu, t).sobolev_norm(s);
    const double upp = std::sqrt(upp_sq(t));
    hb.up_series.push_back(up);
    hb.upp_series.push_back(upp);
    hb.sup_up = std::max(hb.sup_up, up);
    hb.sup_upp = std::max(hb.sup_upp, upp);
    if (up > prev_up * (1.0 + 1e-13) || upp > prev_upp * (1.0 + 1e-13)) hb.monotone = false;
    prev_up = up;
    prev_upp = upp;
  }

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < hb.times.size(); ++i) {
    integral += boost::math::quadrature::gauss<double, 15>::integrate(upp_sq, hb.times[i],
                                                                       hb.times[i + 1]);
  }
  hb.l2t_upp = std::sqrt(integral);
  hb.k_constant = hb.delta > 0.0 ? hb.l2t_upp / (hb.delta / std::sqrt(nu)) : 0.0;
  // the sup bounds hold mode by mode; allow rounding in the norm sums
  const double slack = 1.0 + 1e-12;
  hb.pass = hb.sup_up <= hb.up0 * slack && hb.sup_upp <= hb.upp0 * slack && hb.monotone;
  return hb;
}

}  // namespace shearlab
