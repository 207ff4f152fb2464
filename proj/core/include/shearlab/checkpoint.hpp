#pragma once

#include <string>

#include "shearlab/solver.hpp"

namespace shearlab {

struct Checkpoint {
  FrequencyGrid grid{8, 8, 1.0};
  double nu = 0.0;
  double regularity = 0.0;
  double t = 0.0;
  Frame frame = Frame::couette;
  SpectralField f{grid};
};

// Layout: "SHLBCKPT", u32 version, u32 nz, u32 nv, f64 lv, f64 nu, f64 N,
// f64 t, u32 frame, then (re, im) f64 pairs in row-major (k, eta) order. All
// little-endian. Written atomically.
void write_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint read_checkpoint(const std::string& path);

std::string encode_checkpoint(const Checkpoint& ck);
Checkpoint decode_checkpoint(const std::string& bytes);

}  // namespace shearlab
