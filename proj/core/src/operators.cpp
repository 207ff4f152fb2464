#include "shearlab/operators.hpp"

#include <cmath>
#include <string>

#include "shearlab/errors.hpp"

namespace shearlab {

namespace {

constexpr Complex kI{0.0, 1.0};

template <typename Symbol>
SpectralField apply_symbol(const SpectralField& f, Symbol&& symbol) {
  const auto& g = f.grid();
  SpectralField out(g);
  for (int iz = 0; iz < g.nz(); ++iz) {
    const int k = g.k_of(iz);
    for (int iv = 0; iv < g.nv(); ++iv) {
      out(iz, iv) = symbol(k, g.eta_of(iv)) * f(iz, iv);
    }
  }
  return out;
}

}  // namespace

Complex OperatorStamp::symbol(int k, double eta) const {
  switch (kind) {
    case OperatorKind::grad_L_z:
      return kI * static_cast<double>(k);
    case OperatorKind::grad_L_v:
      return kI * (eta - k * t);
    case OperatorKind::laplace_L:
      return laplace_symbol(k, eta, t);
    case OperatorKind::inv_laplace_L: {
      if (k == 0 && eta == 0.0) return 0.0;
      return 1.0 / laplace_symbol(k, eta, t);
    }
    case OperatorKind::sobolev_N:
      return std::pow(1.0 + static_cast<double>(k) * k + eta * eta, 0.5 * regularity);
  }
  return 0.0;
}

SpectralField OperatorStamp::apply(const SpectralField& f) const {
  return apply_symbol(f, [this](int k, double eta) { return symbol(k, eta); });
}

std::pair<SpectralField, SpectralField> grad_L(const SpectralField& f, double t) {
  return {OperatorStamp{t, OperatorKind::grad_L_z}.apply(f),
          OperatorStamp{t, OperatorKind::grad_L_v}.apply(f)};
}

SpectralField laplace_L(const SpectralField& f, double t) {
  return OperatorStamp{t, OperatorKind::laplace_L}.apply(f);
}

SpectralField inv_laplace_L(const SpectralField& f, double t) {
  return OperatorStamp{t, OperatorKind::inv_laplace_L}.apply(f);
}

std::pair<SpectralField, SpectralField> project_modes(const SpectralField& f) {
  const auto& g = f.grid();
  SpectralField zero(g);
  SpectralField nonzero = f;
  for (int iv = 0; iv < g.nv(); ++iv) {
    zero(0, iv) = f(0, iv);
    nonzero(0, iv) = 0.0;
  }
  return {std::move(zero), std::move(nonzero)};
}

double sobolev_norm(const SpectralField& f, double regularity) {
  if (regularity < 0.0) throw ValidationError("Sobolev regularity must be >= 0");
  const auto& g = f.grid();
  double sum = 0.0;
  for (int iz = 0; iz < g.nz(); ++iz) {
    const double k = g.k_of(iz);
    for (int iv = 0; iv < g.nv(); ++iv) {
      const double eta = g.eta_of(iv);
      const double w = regularity == 0.0 ? 1.0 : std::pow(1.0 + k * k + eta * eta, regularity);
      sum += w * std::norm(f(iz, iv));
    }
  }
  return std::sqrt(sum);
}

double l2_norm(const SpectralField& f) { return sobolev_norm(f, 0.0); }

double inner(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f.grid(), g.grid());
  double sum = 0.0;
  auto a = f.coeffs();
  auto b = g.coeffs();
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] * std::conj(b[i])).real();
  return sum;
}

bool is_aliased_mode(const FrequencyGrid& grid, int iz, int iv) {
  return std::abs(grid.k_of(iz)) > grid.k_cut() || std::abs(grid.j_of(iv)) > grid.j_cut();
}

void dealias_in_place(SpectralField& f) {
  const auto& g = f.grid();
  for (int iz = 0; iz < g.nz(); ++iz) {
    const bool zrow = std::abs(g.k_of(iz)) > g.k_cut();
    for (int iv = 0; iv < g.nv(); ++iv) {
      if (zrow || std::abs(g.j_of(iv)) > g.j_cut()) f(iz, iv) = 0.0;
    }
  }
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_in_place(out);
  return out;
}

double spillover_fraction_1d(std::span<const double> samples, double lv) {
  const int n = static_cast<int>(samples.size());
  const double dv = lv / n;
  double total = 0.0;
  double outer = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = -0.5 * lv + dv * i;
    const double m = samples[i] * samples[i];
    total += m;
    if (std::abs(v) >= 0.45 * lv) outer += m;
  }
  return total > 0.0 ? outer / total : 0.0;
}

double spillover_fraction(const PhysicalField& f) {
  const auto& g = f.grid;
  double total = 0.0;
  double outer = 0.0;
  for (int iz = 0; iz < g.nz(); ++iz) {
    for (int iv = 0; iv < g.nv(); ++iv) {
      const double m = f(iz, iv) * f(iz, iv);
      total += m;
      if (std::abs(g.v_at(iv)) >= 0.45 * g.lv()) outer += m;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

bool check_spillover(double fraction, const char* what, SpilloverLimits limits) {
  if (fraction > limits.fail) {
    throw SpilloverError(std::string(what) + ": mass fraction " + std::to_string(fraction) +
                         " in the outer 10% of the box exceeds " + std::to_string(limits.fail));
  }
  return fraction > limits.warn;
}

}  // namespace shearlab
