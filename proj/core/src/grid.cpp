#include "shearlab/grid.hpp"

#include <string>

#include "shearlab/errors.hpp"

namespace shearlab {

FrequencyGrid::FrequencyGrid(int nz, int nv, double lv) : nz_(nz), nv_(nv), lv_(lv) {
  if (nz < 8 || nv < 8 || nz % 2 != 0 || nv % 2 != 0) {
    throw ValidationError("grid dimensions must be even and >= 8 (got " + std::to_string(nz) +
                          "x" + std::to_string(nv) + ")");
  }
  if (!(lv > 0.0)) throw ValidationError("v-period must be positive");
}

int FrequencyGrid::index_z(int k) const {
  if (!contains_k(k)) throw ValidationError("k=" + std::to_string(k) + " outside grid");
  return k >= 0 ? k : k + nz_;
}

int FrequencyGrid::index_v(int j) const {
  if (!contains_j(j)) throw ValidationError("j=" + std::to_string(j) + " outside grid");
  return j >= 0 ? j : j + nv_;
}

void require_same_grid(const FrequencyGrid& a, const FrequencyGrid& b) {
  if (!(a == b)) {
    throw StructuralError("grid mismatch: " + std::to_string(a.nz()) + "x" +
                          std::to_string(a.nv()) + " vs " + std::to_string(b.nz()) + "x" +
                          std::to_string(b.nv()));
  }
}

}  // namespace shearlab
