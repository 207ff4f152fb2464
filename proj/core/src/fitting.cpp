#include "shearlab/fitting.hpp"

#include <cmath>

#include "shearlab/errors.hpp"

namespace shearlab {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw StructuralError("fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw ValidationError("fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw ValidationError("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.points = n;
  return fit;
}

std::vector<double> derivative_weights(double x0, std::span<const double> xs) {
  // Fornberg (1988), first derivative only.
  const int n = static_cast<int>(xs.size());
  if (n < 2) throw ValidationError("derivative_weights: need at least two nodes");
  std::vector<std::vector<double>> c(n, std::vector<double>(2, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

std::vector<double> geometric_ladder(double t_min, double t_max, int n, bool include_zero) {
  if (!(t_min > 0.0) || !(t_max >= t_min) || n < 1) {
    throw ValidationError("geometric_ladder: need 0 < t_min <= t_max and n >= 1");
  }
  std::vector<double> out;
  if (include_zero) out.push_back(0.0);
  if (n == 1) {
    out.push_back(t_max);
    return out;
  }
  const double ratio = std::log(t_max / t_min) / (n - 1);
  for (int i = 0; i < n; ++i) out.push_back(i == n - 1 ? t_max : t_min * std::exp(ratio * i));
  return out;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw StructuralError("trapezoid: size mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

}  // namespace shearlab
