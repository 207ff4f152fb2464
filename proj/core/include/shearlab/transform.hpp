#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "shearlab/spectral_field.hpp"

namespace shearlab {

// FFTW-backed 2D transform between PhysicalField samples and SpectralField
// coefficients. The forward direction carries 1/(nz*nv). One instance owns
// its scratch buffers and must not be shared between threads; create one per
// worker.
class Transform {
 public:
  explicit Transform(const FrequencyGrid& grid);
  ~Transform();
  Transform(Transform&&) noexcept;
  Transform& operator=(Transform&&) noexcept;
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  const FrequencyGrid& grid() const;

  SpectralField forward(const PhysicalField& f);
  PhysicalField inverse(const SpectralField& f);
  void inverse(const SpectralField& f, PhysicalField& out);
  // Complex physical samples, for fields that are not Hermitian.
  std::vector<std::complex<double>> inverse_complex(const SpectralField& f);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// 1D transform over the v direction with the same conventions.
class Transform1D {
 public:
  explicit Transform1D(int n);
  ~Transform1D();
  Transform1D(Transform1D&&) noexcept;
  Transform1D& operator=(Transform1D&&) noexcept;
  Transform1D(const Transform1D&) = delete;
  Transform1D& operator=(const Transform1D&) = delete;

  int size() const;
  std::vector<std::complex<double>> forward(std::span<const double> samples);
  std::vector<double> inverse(std::span<const std::complex<double>> coeffs);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace shearlab
