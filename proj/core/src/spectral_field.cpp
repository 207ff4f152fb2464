#include "shearlab/spectral_field.hpp"

#include <algorithm>
#include <cmath>

#include "shearlab/errors.hpp"

namespace shearlab {

SpectralField::SpectralField(const FrequencyGrid& grid)
    : grid_(grid), coeffs_(grid.size(), Complex{0.0, 0.0}) {}

SpectralField::SpectralField(const FrequencyGrid& grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw StructuralError("coefficient count does not match grid");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(Complex s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField& SpectralField::axpy(Complex s, const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * other.coeffs_[i];
  return *this;
}

void SpectralField::set_zero() { std::fill(coeffs_.begin(), coeffs_.end(), Complex{}); }

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

double SpectralField::hermitian_defect() const {
  double worst = 0.0;
  const int nz = grid_.nz();
  const int nv = grid_.nv();
  for (int iz = 0; iz < nz; ++iz) {
    const int k = grid_.k_of(iz);
    if (k == -nz / 2) continue;
    for (int iv = 0; iv < nv; ++iv) {
      const int j = grid_.j_of(iv);
      if (j == -nv / 2) continue;
      const Complex a = (*this)(iz, iv);
      const Complex b = (*this)(grid_.index_z(-k), grid_.index_v(-j));
      worst = std::max(worst, std::abs(a - std::conj(b)));
    }
  }
  return worst;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(Complex s, SpectralField a) { return a *= s; }

}  // namespace shearlab
