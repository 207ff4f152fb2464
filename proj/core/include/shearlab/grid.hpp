#pragma once

#include <cstddef>
#include <numbers>

namespace shearlab {

// Doubly periodic truncation of T x R. The z direction has period 2*pi and
// integer wavenumbers k; the v direction has period lv and wavenumbers
// eta = (2*pi/lv) * j. Storage is row-major over (z index, v index), both in
// FFT order (0, 1, ..., n/2-1, -n/2, ..., -1).
class FrequencyGrid {
 public:
  FrequencyGrid(int nz, int nv, double lv = 32.0);

  int nz() const { return nz_; }
  int nv() const { return nv_; }
  double lv() const { return lv_; }
  std::size_t size() const { return static_cast<std::size_t>(nz_) * nv_; }

  std::size_t flat(int iz, int iv) const {
    return static_cast<std::size_t>(iz) * nv_ + iv;
  }

  // index -> integer frequency
  int k_of(int iz) const { return iz < nz_ / 2 ? iz : iz - nz_; }
  int j_of(int iv) const { return iv < nv_ / 2 ? iv : iv - nv_; }
  double eta_of(int iv) const { return eta_unit() * j_of(iv); }
  double eta_unit() const { return 2.0 * std::numbers::pi / lv_; }

  // integer frequency -> index; k in [-nz/2, nz/2), j in [-nv/2, nv/2)
  int index_z(int k) const;
  int index_v(int j) const;
  bool contains_k(int k) const { return k >= -nz_ / 2 && k < nz_ / 2; }
  bool contains_j(int j) const { return j >= -nv_ / 2 && j < nv_ / 2; }

  // 2/3-rule cutoffs: modes with |k| > k_cut or |j| > j_cut are aliased.
  int k_cut() const { return nz_ / 3; }
  int j_cut() const { return nv_ / 3; }
  double eta_cut() const { return eta_unit() * j_cut(); }

  double dz() const { return 2.0 * std::numbers::pi / nz_; }
  double dv() const { return lv_ / nv_; }
  double z_at(int iz) const { return dz() * iz; }
  // Physical v coordinates are centred: v in [-lv/2, lv/2).
  double v_at(int iv) const { return -0.5 * lv_ + dv() * iv; }

  bool operator==(const FrequencyGrid& other) const = default;

 private:
  int nz_;
  int nv_;
  double lv_;
};

// Throws StructuralError when the two grids differ.
void require_same_grid(const FrequencyGrid& a, const FrequencyGrid& b);

}  // namespace shearlab
