#pragma once

#include <complex>
#include <span>
#include <vector>

#include "shearlab/grid.hpp"

namespace shearlab {

using Complex = std::complex<double>;

// Fourier coefficients over a FrequencyGrid. Coefficients follow the
// convention f(z, v) = sum_{k,j} c(k, j) exp(i (k z + eta_j (v + lv/2))),
// i.e. the forward transform carries the 1/(nz*nv) factor and norms use unit
// Plancherel weight (box average of |f|^2).
class SpectralField {
 public:
  explicit SpectralField(const FrequencyGrid& grid);
  SpectralField(const FrequencyGrid& grid, std::vector<Complex> coeffs);

  const FrequencyGrid& grid() const { return grid_; }
  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }

  Complex& operator()(int iz, int iv) { return coeffs_[grid_.flat(iz, iv)]; }
  const Complex& operator()(int iz, int iv) const { return coeffs_[grid_.flat(iz, iv)]; }

  // Access by integer frequency (k, j).
  Complex& mode(int k, int j) { return coeffs_[grid_.flat(grid_.index_z(k), grid_.index_v(j))]; }
  Complex mode(int k, int j) const {
    return coeffs_[grid_.flat(grid_.index_z(k), grid_.index_v(j))];
  }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(Complex s);
  // this += s * other
  SpectralField& axpy(Complex s, const SpectralField& other);

  void set_zero();
  double max_abs() const;
  bool all_finite() const;

  // Largest |c(k,j) - conj(c(-k,-j))| over the grid, excluding the unpaired
  // Nyquist rows/columns.
  double hermitian_defect() const;

  bool operator==(const SpectralField& other) const = default;

 private:
  FrequencyGrid grid_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(Complex s, SpectralField a);

// Real samples on the physical grid, row-major over (z index, v index).
struct PhysicalField {
  FrequencyGrid grid;
  std::vector<double> values;

  explicit PhysicalField(const FrequencyGrid& g) : grid(g), values(g.size(), 0.0) {}
  double& operator()(int iz, int iv) { return values[grid.flat(iz, iv)]; }
  double operator()(int iz, int iv) const { return values[grid.flat(iz, iv)]; }
};

}  // namespace shearlab
