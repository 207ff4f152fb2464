#pragma once

#include <cstdint>
#include <string>

#include "shearlab/spectral_field.hpp"

namespace shearlab {

struct DataSpec {
  std::string kind = "random_band";  // single_mode | random_band | dipole
  int k = 1;                         // single_mode
  int j = 0;                         // single_mode, v-frequency index
  int k_max = 2;                     // random_band
  double eta_max = 2.0;              // random_band
  double width = 1.5;                // Gaussian envelope width in v (random_band, dipole)
};

// Real field with ||f||_{H^N} = eps. Throws ValidationError when the spec
// reaches beyond the dealiased band.
SpectralField initial_data(const DataSpec& spec, const FrequencyGrid& grid, double eps,
                           double regularity, std::uint64_t seed);

}  // namespace shearlab
