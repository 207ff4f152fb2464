#include "shearlab/transform.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "shearlab/errors.hpp"

namespace shearlab {

namespace {

// The FFTW planner is not thread safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct Transform::Impl {
  FrequencyGrid grid;
  fftw_complex* buf_in = nullptr;
  fftw_complex* buf_out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Impl(const FrequencyGrid& g) : grid(g) {
    const std::size_t n = grid.size();
    buf_in = fftw_alloc_complex(n);
    buf_out = fftw_alloc_complex(n);
    std::lock_guard lock(planner_mutex());
    fwd = fftw_plan_dft_2d(grid.nz(), grid.nv(), buf_in, buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_2d(grid.nz(), grid.nv(), buf_in, buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(fwd);
      fftw_destroy_plan(bwd);
    }
    fftw_free(buf_in);
    fftw_free(buf_out);
  }
};

Transform::Transform(const FrequencyGrid& grid) : impl_(std::make_unique<Impl>(grid)) {}
Transform::~Transform() = default;
Transform::Transform(Transform&&) noexcept = default;
Transform& Transform::operator=(Transform&&) noexcept = default;

const FrequencyGrid& Transform::grid() const { return impl_->grid; }

SpectralField Transform::forward(const PhysicalField& f) {
  require_same_grid(impl_->grid, f.grid);
  const std::size_t n = impl_->grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    impl_->buf_in[i][0] = f.values[i];
    impl_->buf_in[i][1] = 0.0;
  }
  fftw_execute(impl_->fwd);
  SpectralField out(impl_->grid);
  auto c = out.coeffs();
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = Complex{impl_->buf_out[i][0] * scale, impl_->buf_out[i][1] * scale};
  }
  return out;
}

void Transform::inverse(const SpectralField& f, PhysicalField& out) {
  require_same_grid(impl_->grid, f.grid());
  require_same_grid(impl_->grid, out.grid);
  const std::size_t n = impl_->grid.size();
  std::memcpy(impl_->buf_in, f.coeffs().data(), n * sizeof(fftw_complex));
  fftw_execute(impl_->bwd);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = impl_->buf_out[i][0];
}

PhysicalField Transform::inverse(const SpectralField& f) {
  PhysicalField out(impl_->grid);
  inverse(f, out);
  return out;
}

std::vector<std::complex<double>> Transform::inverse_complex(const SpectralField& f) {
  require_same_grid(impl_->grid, f.grid());
  const std::size_t n = impl_->grid.size();
  std::memcpy(impl_->buf_in, f.coeffs().data(), n * sizeof(fftw_complex));
  fftw_execute(impl_->bwd);
  std::vector<std::complex<double>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {impl_->buf_out[i][0], impl_->buf_out[i][1]};
  return out;
}

struct Transform1D::Impl {
  int n;
  fftw_complex* buf_in = nullptr;
  fftw_complex* buf_out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Impl(int size) : n(size) {
    if (n < 2) throw ValidationError("1D transform needs at least 2 points");
    buf_in = fftw_alloc_complex(n);
    buf_out = fftw_alloc_complex(n);
    std::lock_guard lock(planner_mutex());
    fwd = fftw_plan_dft_1d(n, buf_in, buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(n, buf_in, buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(fwd);
      fftw_destroy_plan(bwd);
    }
    fftw_free(buf_in);
    fftw_free(buf_out);
  }
};

Transform1D::Transform1D(int n) : impl_(std::make_unique<Impl>(n)) {}
Transform1D::~Transform1D() = default;
Transform1D::Transform1D(Transform1D&&) noexcept = default;
Transform1D& Transform1D::operator=(Transform1D&&) noexcept = default;

int Transform1D::size() const { return impl_->n; }

std::vector<std::complex<double>> Transform1D::forward(std::span<const double> samples) {
  const int n = impl_->n;
  if (static_cast<int>(samples.size()) != n) throw StructuralError("1D sample count mismatch");
  for (int i = 0; i < n; ++i) {
    impl_->buf_in[i][0] = samples[i];
    impl_->buf_in[i][1] = 0.0;
  }
  fftw_execute(impl_->fwd);
  std::vector<std::complex<double>> out(n);
  const double scale = 1.0 / n;
  for (int i = 0; i < n; ++i) out[i] = {impl_->buf_out[i][0] * scale, impl_->buf_out[i][1] * scale};
  return out;
}

std::vector<double> Transform1D::inverse(std::span<const std::complex<double>> coeffs) {
  const int n = impl_->n;
  if (static_cast<int>(coeffs.size()) != n) throw StructuralError("1D coefficient count mismatch");
  std::memcpy(impl_->buf_in, coeffs.data(), n * sizeof(fftw_complex));
  fftw_execute(impl_->bwd);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = impl_->buf_out[i][0];
  return out;
}

}  // namespace shearlab
