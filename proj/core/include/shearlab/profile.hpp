#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace shearlab {

// A real function of v on the periodic box [-lv/2, lv/2), held both as grid
// samples and as Fourier coefficients (same conventions as SpectralField).
class Profile1D {
 public:
  Profile1D() = default;
  Profile1D(int n, double lv);
  Profile1D(std::vector<double> samples, double lv);
  static Profile1D from_function(int n, double lv, const std::function<double(double)>& f);
  static Profile1D from_coeffs(std::vector<std::complex<double>> coeffs, double lv);

  int size() const { return static_cast<int>(samples_.size()); }
  double lv() const { return lv_; }
  double dv() const { return lv_ / size(); }
  double v_at(int i) const { return -0.5 * lv_ + dv() * i; }
  double eta_of(int i) const;

  std::span<const double> samples() const { return samples_; }
  std::span<const std::complex<double>> coeffs() const { return coeffs_; }

  Profile1D derivative(int order = 1) const;
  Profile1D heat_evolved(double nu, double t) const;

  double sobolev_norm(double s) const;
  double l2_norm() const { return sobolev_norm(0.0); }
  double sup_norm() const;

  // Band-limited evaluation by direct trigonometric summation; exact for the
  // trigonometric interpolant, periodic outside the box.
  double evaluate(double v) const;
  std::vector<double> evaluate(std::span<const double> vs) const;

  Profile1D operator+(const Profile1D& o) const;
  Profile1D operator-(const Profile1D& o) const;
  Profile1D operator*(const Profile1D& o) const;  // pointwise on samples
  Profile1D scaled(double s) const;

 private:
  Profile1D(std::vector<double> samples, std::vector<std::complex<double>> coeffs, double lv);

  std::vector<double> samples_;
  std::vector<std::complex<double>> coeffs_;
  double lv_ = 1.0;
};

}  // namespace shearlab
