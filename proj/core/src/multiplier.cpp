#include "shearlab/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <nlohmann/json.hpp>

#include "shearlab/errors.hpp"
#include "shearlab/fitting.hpp"

namespace shearlab {

void MultiplierParams::validate() const {
  if (!(nu > 0.0 && nu <= 1.0)) throw ValidationError("multiplier needs 0 < nu <= 1");
  if (!(regularity > 1.0)) throw ValidationError("multiplier needs N > 1");
}

// arctan(a) - arctan(b) is written as atan2(a - b, 1 + ab), which is exact in
// angle and avoids cancellation for large arguments.

double m1(double t, int k, double xi) {
  if (k == 0) return 1.0;
  const double r = xi / k;
  return std::exp(-std::atan2(t, 1.0 + r * (r - t)) / std::abs(k));
}

double m2(double t, int k, double xi, double nu) {
  if (k == 0) return 1.0;
  const double c = std::cbrt(nu);
  const double r = xi / k;
  return std::exp(-std::atan2(c * t, 1.0 - c * c * (t - r) * r));
}

double m_value(double t, int k, double xi, double nu) { return m1(t, k, xi) * m2(t, k, xi, nu); }

double ghost_rate(double t, int k, double xi, double nu) {
  if (k == 0) return 0.0;
  const double s = xi - k * t;
  const double r1 = std::abs(k) / (static_cast<double>(k) * k + s * s);
  const double c = std::cbrt(nu);
  const double d = c * (t - xi / k);
  const double r2 = c / (d * d + 1.0);
  return r1 + r2;
}

double m_dot(double t, int k, double xi, double nu) {
  if (k == 0) return 0.0;
  return -m_value(t, k, xi, nu) * ghost_rate(t, k, xi, nu);
}

MultiplierState::MultiplierState(const FrequencyGrid& grid, MultiplierParams params, double t)
    : grid_(grid), params_(params), t_(t) {
  params_.validate();
  const std::size_t n = grid.size();
  m1_.resize(n);
  m2_.resize(n);
  m_.resize(n);
  mdot_.resize(n);
  a_.resize(n);
  rate_.resize(n);
  const double half_n = 0.5 * params_.regularity;
  for (int iz = 0; iz < grid.nz(); ++iz) {
    const int k = grid.k_of(iz);
    for (int iv = 0; iv < grid.nv(); ++iv) {
      const double eta = grid.eta_of(iv);
      const std::size_t i = grid.flat(iz, iv);
      m1_[i] = shearlab::m1(t, k, eta);
      m2_[i] = shearlab::m2(t, k, eta, params_.nu);
      m_[i] = m1_[i] * m2_[i];
      rate_[i] = shearlab::ghost_rate(t, k, eta, params_.nu);
      mdot_[i] = -m_[i] * rate_[i];
      a_[i] = m_[i] * std::pow(1.0 + static_cast<double>(k) * k + eta * eta, half_n);
    }
  }
}

SpectralField apply_A(const SpectralField& f, const MultiplierState& state) {
  require_same_grid(f.grid(), state.grid());
  SpectralField out = f;
  auto c = out.coeffs();
  auto a = state.a();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= a[i];
  return out;
}

SpectralField apply_A(const SpectralField& f, double t, const MultiplierParams& params) {
  return apply_A(f, MultiplierState(f.grid(), params, t));
}

const ConditionCheck& ConditionReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw StructuralError("no condition named " + name);
}

std::string ConditionReport::to_json() const {
  nlohmann::json j;
  j["note"] = note;
  j["pass"] = pass;
  j["nu"] = nu;
  j["N"] = regularity;
  j["grid"] = {{"nz", nz}, {"nv", nv}, {"lv", lv}};
  j["t_samples"] = t_samples;
  j["floor_c"] = kMultiplierFloor;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"statement", c.statement},
                   {"pass", c.pass},
                   {"constant", c.constant},
                   {"bound", c.bound},
                   {"witness",
                    {{"t", c.witness.t}, {"k", c.witness.k}, {"xi", c.witness.xi},
                     {"eta", c.witness.eta}}}});
  }
  j["conditions"] = arr;
  return j.dump(2);
}

std::vector<double> condition_time_ladder(double nu, int points) {
  return geometric_ladder(1e-2, 10.0 * std::pow(nu, -1.0 / 3.0), points, true);
}

ConditionReport verify_conditions(const FrequencyGrid& grid, double nu, double regularity,
                                  std::span<const double> t_samples) {
  MultiplierParams params{nu, regularity};
  params.validate();
  for (double t : t_samples) {
    if (!std::isfinite(t) || t < 0.0) throw ValidationError("time samples must be finite and >= 0");
  }

  ConditionReport rep;
  rep.nu = nu;
  rep.regularity = regularity;
  rep.nz = grid.nz();
  rep.nv = grid.nv();
  rep.lv = grid.lv();
  rep.t_samples.assign(t_samples.begin(), t_samples.end());
  rep.note =
      "condition (e) reads |k, eta-kt| as sqrt(k^2 + (eta-kt)^2); d_xi M uses centred "
      "differences with h = (2 pi / lv) / 16";

  const double c = kMultiplierFloor;
  const double nu13 = std::cbrt(nu);
  const double nu16 = std::pow(nu, 1.0 / 6.0);
  const double h = grid.eta_unit() / 16.0;

  ConditionCheck ca{"a", "M(0,k,xi) = M(t,0,xi) = 1", true, 0.0, 0.0, {}};
  ConditionCheck cb{"b", "exp(-2 pi) <= M <= 1", true, 1.0, c, {}};
  ConditionCheck cc{"c", "-dM/M - |k|/(k^2+|xi-kt|^2) >= 0", true, INFINITY, 0.0, {}};
  ConditionCheck cd{"d", "|d_xi M / M| <= C_d / |k|", true, 0.0, (1.0 + nu13) * (1.0 + 1e-3), {}};
  ConditionCheck ce{"e", "1 <= C_e nu^{-1/6} (sqrt(-dM M) + nu^{1/2} |k, eta-kt|)", true, 0.0,
                    std::sqrt(2.0) / c, {}};
  ConditionCheck cf{"f", "sqrt(-dM M)(eta) <= C_f <eta-xi> sqrt(-dM M)(xi)", true, 0.0,
                    std::sqrt(2.0) / c, {}};

  const int nv = grid.nv();
  std::vector<double> q(nv);
  std::vector<double> etas(nv);
  for (int iv = 0; iv < nv; ++iv) etas[iv] = grid.eta_of(iv);

  for (double t : t_samples) {
    for (int iz = 0; iz < grid.nz(); ++iz) {
      const int k = grid.k_of(iz);
      for (int iv = 0; iv < nv; ++iv) {
        const double xi = etas[iv];
        const double m = m_value(t, k, xi, nu);
        const ConditionWitness w{t, k, xi, xi};

        // (a)
        if ((t == 0.0 || k == 0) && m != 1.0) {
          ca.pass = false;
          ca.constant = std::max(ca.constant, std::abs(m - 1.0));
          ca.witness = w;
        }
        // (b)
        if (m < cb.constant) {
          cb.constant = m;
          cb.witness = w;
        }
        if (m > 1.0 || m < c) {
          cb.pass = false;
          cb.witness = w;
        }
        if (k == 0) continue;

        // (c)
        const double s = xi - k * t;
        const double r1 = std::abs(k) / (static_cast<double>(k) * k + s * s);
        const double rate = ghost_rate(t, k, xi, nu);
        const double margin = rate - r1;
        if (margin < cc.constant) {
          cc.constant = margin;
          cc.witness = w;
        }
        // (d)
        const double dm = (m_value(t, k, xi + h, nu) - m_value(t, k, xi - h, nu)) / (2.0 * h);
        const double cdv = std::abs(k) * std::abs(dm / m);
        if (cdv > cd.constant) {
          cd.constant = cdv;
          cd.witness = w;
        }
        // (e)
        const double root = std::sqrt(rate) * m;  // sqrt(-dM M)
        const double rhs = (root + std::sqrt(nu) * std::sqrt(static_cast<double>(k) * k + s * s)) / nu16;
        const double cev = 1.0 / rhs;
        if (cev > ce.constant) {
          ce.constant = cev;
          ce.witness = w;
        }
        q[iv] = root;
      }
      if (k == 0) continue;
      // (f): worst ratio over all pairs (eta, xi) on this k-row
      for (int i = 0; i < nv; ++i) {
        for (int j = 0; j < nv; ++j) {
          const double d = etas[i] - etas[j];
          const double ratio = q[i] / (q[j] * std::sqrt(1.0 + d * d));
          if (ratio > cf.constant) {
            cf.constant = ratio;
            cf.witness = {t, k, etas[j], etas[i]};
          }
        }
      }
    }
  }
  if (cc.constant < 0.0) cc.pass = false;
  cd.pass = cd.constant <= cd.bound;
  ce.pass = ce.constant <= ce.bound;
  cf.pass = cf.constant <= cf.bound;
  if (!std::isfinite(cc.constant)) cc.constant = 0.0;

  rep.checks = {ca, cb, cc, cd, ce, cf};
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& x) { return x.pass; });
  return rep;
}

}  // namespace shearlab
