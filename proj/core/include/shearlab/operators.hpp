#pragma once

#include <span>
#include <utility>

#include "shearlab/spectral_field.hpp"

namespace shearlab {

// Fourier multipliers of the Couette moving frame at time t.
enum class OperatorKind { grad_L_z, grad_L_v, laplace_L, inv_laplace_L, sobolev_N };

struct OperatorStamp {
  double t = 0.0;
  OperatorKind kind = OperatorKind::laplace_L;
  double regularity = 0.0;  // only used by sobolev_N

  // Multiplier value at integer wavenumber k and v-frequency eta.
  Complex symbol(int k, double eta) const;
  SpectralField apply(const SpectralField& f) const;
};

// -(k^2 + (eta - k t)^2)
inline double laplace_symbol(int k, double eta, double t) {
  const double s = eta - k * t;
  return -(static_cast<double>(k) * k + s * s);
}

// (d_z f, (d_v - t d_z) f)
std::pair<SpectralField, SpectralField> grad_L(const SpectralField& f, double t);
SpectralField laplace_L(const SpectralField& f, double t);
// Division by -(k^2 + (eta-kt)^2); the (0,0) mode is set to zero.
SpectralField inv_laplace_L(const SpectralField& f, double t);

// (k = 0 column, everything else); the two parts sum to f exactly.
std::pair<SpectralField, SpectralField> project_modes(const SpectralField& f);

// sqrt(sum (1+k^2+eta^2)^N |c|^2), unit Plancherel weight.
double sobolev_norm(const SpectralField& f, double regularity);
double l2_norm(const SpectralField& f);
// Re sum c_f conj(c_g), i.e. the L^2 inner product of the physical fields.
double inner(const SpectralField& f, const SpectralField& g);

bool is_aliased_mode(const FrequencyGrid& grid, int iz, int iv);
SpectralField dealias(const SpectralField& f);
void dealias_in_place(SpectralField& f);

// Fraction of sum |f|^2 sitting in the outer 10% of the v-box (|v| >= 0.45 lv).
double spillover_fraction(const PhysicalField& f);
double spillover_fraction_1d(std::span<const double> samples, double lv);

struct SpilloverLimits {
  double warn = 1e-6;
  double fail = 1e-3;
};

// Throws SpilloverError above the hard limit; returns true when above the
// soft limit so the caller can log a warning.
bool check_spillover(double fraction, const char* what, SpilloverLimits limits = {});

}  // namespace shearlab
