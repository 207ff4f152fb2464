#include "shearlab/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "shearlab/errors.hpp"
#include "shearlab/operators.hpp"
#include "shearlab/transform.hpp"

namespace shearlab {

namespace {

SpectralField single_mode(const DataSpec& spec, const FrequencyGrid& grid) {
  if (std::abs(spec.k) > grid.k_cut() || std::abs(spec.j) > grid.j_cut()) {
    throw ValidationError("single_mode lies beyond the dealiased band");
  }
  SpectralField f(grid);
  f.mode(spec.k, spec.j) = 1.0;
  f.mode(-spec.k, -spec.j) = 1.0;
  return f;
}

// Mass lost to the 2/3 truncation must stay at rounding level.
SpectralField band_limit(const SpectralField& f, const char* what) {
  const double total = l2_norm(f);
  auto kept = dealias(f);
  const double lost = l2_norm(f - kept);
  if (total > 0.0 && lost > 1e-10 * total) {
    throw ValidationError(std::string(what) + " is not resolved inside the dealiased band");
  }
  return kept;
}

SpectralField random_band(const DataSpec& spec, const FrequencyGrid& grid, std::uint64_t seed,
                          Transform& fft) {
  const int jmax = static_cast<int>(std::floor(spec.eta_max / grid.eta_unit() + 1e-12));
  if (spec.k_max < 0 || spec.k_max > grid.k_cut() || jmax > grid.j_cut()) {
    throw ValidationError("random_band exceeds the dealiased band");
  }
  if (!(spec.width > 0.0)) throw ValidationError("random_band width must be positive");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField band(grid);
  // draw the upper half plane and mirror it
  for (int k = 0; k <= spec.k_max; ++k) {
    for (int j = -jmax; j <= jmax; ++j) {
      if (k == 0 && j <= 0) continue;
      const Complex c(normal(rng), normal(rng));
      band.mode(k, j) = c;
      band.mode(-k, -j) = std::conj(c);
    }
  }

  PhysicalField phys = fft.inverse(band);
  std::vector<double> envelope(grid.nv());
  double env_mean = 0.0;
  for (int iv = 0; iv < grid.nv(); ++iv) {
    const double v = grid.v_at(iv);
    envelope[iv] = std::exp(-v * v / (2.0 * spec.width * spec.width));
    env_mean += envelope[iv];
  }
  env_mean /= grid.nv();
  double mean = 0.0;
  for (int iz = 0; iz < grid.nz(); ++iz) {
    for (int iv = 0; iv < grid.nv(); ++iv) {
      phys(iz, iv) *= envelope[iv];
      mean += phys(iz, iv);
    }
  }
  mean /= static_cast<double>(grid.size());
  for (int iz = 0; iz < grid.nz(); ++iz) {
    for (int iv = 0; iv < grid.nv(); ++iv) phys(iz, iv) -= mean * envelope[iv] / env_mean;
  }
  auto f = fft.forward(phys);
  f(0, 0) = 0.0;
  return band_limit(f, "random_band");
}

SpectralField dipole(const DataSpec& spec, const FrequencyGrid& grid, Transform& fft) {
  if (!(spec.width > 0.0)) throw ValidationError("dipole width must be positive");
  PhysicalField phys(grid);
  const double w2 = spec.width * spec.width;
  for (int iz = 0; iz < grid.nz(); ++iz) {
    const double bump = std::exp((std::cos(grid.z_at(iz) - std::numbers::pi) - 1.0) / w2);
    for (int iv = 0; iv < grid.nv(); ++iv) {
      const double v = grid.v_at(iv);
      phys(iz, iv) = -v / w2 * std::exp(-v * v / (2.0 * w2)) * bump;
    }
  }
  auto f = fft.forward(phys);
  return band_limit(f, "dipole");
}

}  // namespace

SpectralField initial_data(const DataSpec& spec, const FrequencyGrid& grid, double eps,
                           double regularity, std::uint64_t seed) {
  if (!(eps >= 0.0)) throw ValidationError("eps must be >= 0");
  SpectralField f(grid);
  bool localized = true;
  if (spec.kind == "single_mode") {
    f = single_mode(spec, grid);
    localized = false;
  } else if (spec.kind == "random_band") {
    Transform fft(grid);
    f = random_band(spec, grid, seed, fft);
  } else if (spec.kind == "dipole") {
    Transform fft(grid);
    f = dipole(spec, grid, fft);
  } else {
    throw ValidationError("unknown data kind " + spec.kind);
  }

  if (localized) {
    Transform fft(grid);
    check_spillover(spillover_fraction(fft.inverse(f)), "initial data");
  }
  const double norm = sobolev_norm(f, regularity);
  if (norm == 0.0) throw ValidationError("initial data has zero norm");
  f *= eps / norm;
  return f;
}

}  // namespace shearlab
