#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "shearlab/spectral_field.hpp"

namespace shearlab {

// Uniform lower bound of M = M1 M2: M1 >= exp(-pi/|k|) >= exp(-pi) and
// M2 >= exp(-pi).
inline const double kMultiplierFloor = std::exp(-2.0 * std::numbers::pi);

struct MultiplierParams {
  double nu = 1e-2;
  double regularity = 2.0;  // N

  // 0 < nu <= 1, N > 1
  void validate() const;
};

// Ghost multipliers. Both factors are 1 for k = 0.
double m1(double t, int k, double xi);
double m2(double t, int k, double xi, double nu);
double m_value(double t, int k, double xi, double nu);
// -dM/dt / M = |k|/(k^2 + (xi - kt)^2) + nu^{1/3}/(nu^{2/3}(t - xi/k)^2 + 1); 0 for k = 0.
double ghost_rate(double t, int k, double xi, double nu);
double m_dot(double t, int k, double xi, double nu);

// Tables of M1, M2, M, dM/dt and A = M <D>^N over a grid at one time.
class MultiplierState {
 public:
  MultiplierState(const FrequencyGrid& grid, MultiplierParams params, double t);

  const FrequencyGrid& grid() const { return grid_; }
  const MultiplierParams& params() const { return params_; }
  double t() const { return t_; }

  std::span<const double> m1() const { return m1_; }
  std::span<const double> m2() const { return m2_; }
  std::span<const double> m() const { return m_; }
  std::span<const double> m_dot() const { return mdot_; }
  std::span<const double> a() const { return a_; }
  // -dM/dt / M, so that (-dM/dt M) <D>^{2N} = rate * A^2
  std::span<const double> rate() const { return rate_; }

 private:
  FrequencyGrid grid_;
  MultiplierParams params_;
  double t_;
  std::vector<double> m1_, m2_, m_, mdot_, a_, rate_;
};

SpectralField apply_A(const SpectralField& f, const MultiplierState& state);
SpectralField apply_A(const SpectralField& f, double t, const MultiplierParams& params);

struct ConditionWitness {
  double t = 0.0;
  int k = 0;
  double xi = 0.0;
  double eta = 0.0;
};

struct ConditionCheck {
  std::string name;
  std::string statement;
  bool pass = true;
  double constant = 0.0;  // worst-case value found on the samples
  double bound = 0.0;     // threshold the constant is compared against
  ConditionWitness witness;
};

struct ConditionReport {
  bool pass = true;
  double nu = 0.0;
  double regularity = 0.0;
  int nz = 0;
  int nv = 0;
  double lv = 0.0;
  std::vector<double> t_samples;
  std::vector<ConditionCheck> checks;
  std::string note;

  const ConditionCheck& check(const std::string& name) const;
  std::string to_json() const;
};

// Checks conditions (a)-(f) of the ghost multiplier over every grid mode with
// k != 0 and every sampled time.
ConditionReport verify_conditions(const FrequencyGrid& grid, double nu, double regularity,
                                  std::span<const double> t_samples);

// 0 followed by `points` geometric times from 1e-2 to 10 nu^{-1/3}.
std::vector<double> condition_time_ladder(double nu, int points = 40);

}  // namespace shearlab
