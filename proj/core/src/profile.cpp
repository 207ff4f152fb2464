#include "shearlab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shearlab/errors.hpp"
#include "shearlab/transform.hpp"

namespace shearlab {

namespace {

int freq_index(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace

Profile1D::Profile1D(int n, double lv)
    : samples_(n, 0.0), coeffs_(n, {0.0, 0.0}), lv_(lv) {
  if (n < 2 || n % 2 != 0) throw ValidationError("profile length must be even");
  if (!(lv > 0.0)) throw ValidationError("profile period must be positive");
}

Profile1D::Profile1D(std::vector<double> samples, double lv)
    : samples_(std::move(samples)), lv_(lv) {
  if (samples_.size() < 2 || samples_.size() % 2 != 0) {
    throw ValidationError("profile length must be even");
  }
  Transform1D fft(size());
  coeffs_ = fft.forward(samples_);
}

Profile1D::Profile1D(std::vector<double> samples, std::vector<std::complex<double>> coeffs,
                     double lv)
    : samples_(std::move(samples)), coeffs_(std::move(coeffs)), lv_(lv) {}

Profile1D Profile1D::from_function(int n, double lv, const std::function<double(double)>& f) {
  std::vector<double> s(n);
  const double dv = lv / n;
  for (int i = 0; i < n; ++i) s[i] = f(-0.5 * lv + dv * i);
  return Profile1D(std::move(s), lv);
}

Profile1D Profile1D::from_coeffs(std::vector<std::complex<double>> coeffs, double lv) {
  Transform1D fft(static_cast<int>(coeffs.size()));
  auto s = fft.inverse(coeffs);
  return Profile1D(std::move(s), std::move(coeffs), lv);
}

double Profile1D::eta_of(int i) const {
  return 2.0 * std::numbers::pi / lv_ * freq_index(i, size());
}

Profile1D Profile1D::derivative(int order) const {
  const int n = size();
  std::vector<std::complex<double>> c(coeffs_);
  for (int i = 0; i < n; ++i) {
    if (freq_index(i, n) == -n / 2 && order % 2 == 1) {
      c[i] = 0.0;
      continue;
    }
    c[i] *= std::pow(std::complex<double>(0.0, eta_of(i)), order);
  }
  return from_coeffs(std::move(c), lv_);
}

Profile1D Profile1D::heat_evolved(double nu, double t) const {
  const int n = size();
  std::vector<std::complex<double>> c(coeffs_);
  for (int i = 0; i < n; ++i) {
    const double eta = eta_of(i);
    c[i] *= std::exp(-nu * eta * eta * t);
  }
  return from_coeffs(std::move(c), lv_);
}

double Profile1D::sobolev_norm(double s) const {
  double sum = 0.0;
  for (int i = 0; i < size(); ++i) {
    const double eta = eta_of(i);
    const double w = s == 0.0 ? 1.0 : std::pow(1.0 + eta * eta, s);
    sum += w * std::norm(coeffs_[i]);
  }
  return std::sqrt(sum);
}

double Profile1D::sup_norm() const {
  double m = 0.0;
  for (double x : samples_) m = std::max(m, std::abs(x));
  return m;
}

double Profile1D::evaluate(double v) const {
  const int n = size();
  const double s = v + 0.5 * lv_;
  const double base = 2.0 * std::numbers::pi / lv_ * s;
  // f(s) = c0 + 2 Re sum_{j=1}^{n/2-1} c_j e^{i j base} + Re(c_{-n/2} e^{-i n/2 base})
  double acc = coeffs_[0].real();
  const std::complex<double> step = std::polar(1.0, base);
  std::complex<double> w = step;
  for (int j = 1; j < n / 2; ++j) {
    // resync the recurrence to keep the phase error at rounding level
    if (j % 32 == 0) w = std::polar(1.0, base * j);
    acc += 2.0 * (coeffs_[j] * w).real();
    w *= step;
  }
  acc += (coeffs_[n / 2] * std::polar(1.0, -base * (n / 2))).real();
  return acc;
}

std::vector<double> Profile1D::evaluate(std::span<const double> vs) const {
  std::vector<double> out(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) out[i] = evaluate(vs[i]);
  return out;
}

Profile1D Profile1D::operator+(const Profile1D& o) const {
  std::vector<double> s(samples_);
  for (int i = 0; i < size(); ++i) s[i] += o.samples_[i];
  return Profile1D(std::move(s), lv_);
}

Profile1D Profile1D::operator-(const Profile1D& o) const {
  std::vector<double> s(samples_);
  for (int i = 0; i < size(); ++i) s[i] -= o.samples_[i];
  return Profile1D(std::move(s), lv_);
}

Profile1D Profile1D::operator*(const Profile1D& o) const {
  std::vector<double> s(samples_);
  for (int i = 0; i < size(); ++i) s[i] *= o.samples_[i];
  return Profile1D(std::move(s), lv_);
}

Profile1D Profile1D::scaled(double f) const {
  std::vector<double> s(samples_);
  std::vector<std::complex<double>> c(coeffs_);
  for (auto& x : s) x *= f;
  for (auto& x : c) x *= f;
  return Profile1D(std::move(s), std::move(c), lv_);
}

}  // namespace shearlab
