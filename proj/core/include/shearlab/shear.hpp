#pragma once

#include <string>
#include <vector>

#include "shearlab/profile.hpp"

namespace shearlab {

// Background shear U(y) = y + g(y) near Couette, with g sampled on the
// periodic y-box.
struct ShearProfile {
  std::string name = "couette";
  Profile1D g{8, 32.0};
  double s = 4.0;      // regularity used for delta
  double delta = 0.0;  // ||U' - 1||_{H^s} + ||U''||_{H^s}

  bool is_couette() const { return delta == 0.0 && g.sup_norm() == 0.0; }
};

double shear_delta(const Profile1D& g, double s);

ShearProfile couette_profile(int n, double lv, double s);
// g(y) = A exp(-y^2 / (2 w^2))
ShearProfile gauss_bump_profile(int n, double lv, double amplitude, double width, double s);
// Same shape, amplitude chosen so that delta equals target_delta.
ShearProfile gauss_bump_with_delta(int n, double lv, double target_delta, double width, double s);
// g(y) = A y sech^2(y / w)
ShearProfile tanh_defect_profile(int n, double lv, double amplitude, double width, double s);
// Plain-text table of (y, g) pairs, whitespace separated, '#' comments. The
// table is interpolated with a barycentric rational and taken as zero outside
// its range.
ShearProfile table_profile(const std::string& path, int n, double lv, double s);

// Throws ValidationError if delta > delta_max, SpilloverError if g does not
// decay in the outer part of the box. Returns true on a soft spillover warning.
bool validate_profile(const ShearProfile& profile, double delta_max);

// y-side of the heat-evolved shear: Ubar - y, Ubar' - 1 and Ubar''.
struct ShearY {
  double t = 0.0;
  Profile1D g;
  Profile1D gp;
  Profile1D gpp;
};

ShearY evolve_shear(const ShearProfile& profile, double nu, double t);

struct InverseMap {
  Profile1D beta;  // y(v) = v + beta(v)
  int iterations = 0;
  double last_update = 0.0;
  double residual = 0.0;  // sup |beta - alpha(v + beta)|
};

// Picard iteration beta <- alpha(v + beta) with alpha = -(Ubar - y). Throws
// InversionError when sup |alpha'| >= 0.5.
InverseMap invert_map(const ShearY& y_side, double tol = 1e-12, int max_iterations = 100);

// Full snapshot used by the solver: y-side, inverse map and the v-side
// coefficients a = Ubar'(y(v)), b = Ubar''(y(v)).
struct ShearState {
  double t = 0.0;
  bool trivial = true;  // Couette: a == 1, b == 0 exactly
  ShearY y_side;
  InverseMap map;
  Profile1D a_minus_1;
  Profile1D b;
};

ShearState make_shear_state(const ShearProfile& profile, double nu, double t);

// a - 1 and b on the v-grid from an inverse map.
std::pair<Profile1D, Profile1D> shear_coefficients(const ShearY& y_side, const InverseMap& map);

// v(y(v)) - v at the grid points, sup norm.
double round_trip_error(const ShearY& y_side, const InverseMap& map);

// || b - a d_v a ||_{L^2}
double chain_rule_residual(const ShearState& state);

// samples of f(v + g(v)), evaluated by trigonometric summation
Profile1D compose(const Profile1D& f, const Profile1D& g);

struct HeatBudget {
  double nu = 0.0;
  double t_final = 0.0;
  double s = 0.0;
  double delta = 0.0;
  double up0 = 0.0;       // ||U' - 1||_{H^s}
  double upp0 = 0.0;      // ||U''||_{H^s}
  double sup_up = 0.0;    // sup over the ladder of ||Ubar' - 1||_{H^s}
  double sup_upp = 0.0;   // sup over the ladder of ||Ubar''||_{H^s}
  double l2t_upp = 0.0;   // (int_0^T ||Ubar''||^2_{H^s} dt)^{1/2}
  double k_constant = 0.0;  // l2t_upp / (delta nu^{-1/2})
  bool monotone = true;
  bool pass = true;
  std::vector<double> times;
  std::vector<double> up_series;
  std::vector<double> upp_series;
};

// Heat-semigroup estimates for Ubar: sup bounds on a geometric ladder and the
// L^2_t H^s norm of Ubar'' by composite Gauss-Legendre quadrature.
HeatBudget heat_norm_budget(const Profile1D& g, double nu, double t_final, double s,
                            int ladder_points = 64);

}  // namespace shearlab
