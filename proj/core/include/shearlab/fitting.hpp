#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace shearlab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of y - (slope x + intercept)
  std::size_t points = 0;
};

// Ordinary least squares y ~ slope * x + intercept. Needs >= 2 distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Weights w_i with f'(x0) ~ sum w_i f(xs_i), exact for polynomials of degree
// xs.size()-1 (Fornberg's recursion).
std::vector<double> derivative_weights(double x0, std::span<const double> xs);

// n points geometrically spaced in [t_min, t_max], optionally preceded by 0.
std::vector<double> geometric_ladder(double t_min, double t_max, int n, bool include_zero);

// Trapezoidal integral of y(x) over the sample points.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace shearlab
