#include "lpflow/random_field.hpp"

#include <cmath>
#include <random>

#include "lpflow/errors.hpp"
#include "lpflow/euler.hpp"
#include "lpflow/norms.hpp"
#include "lpflow/spectral.hpp"

namespace lpflow {

void SpectrumSpec::validate(const Grid& grid) const {
  if (k_lo < 1.0) throw ArgumentError("spectrum band must start at |k| >= 1");
  if (k_hi > grid.n() / 2 - 1) throw ArgumentError("spectrum band must end at |k| <= n/2 - 1");
  if (k_hi < k_lo) throw ArgumentError("spectrum band is empty");
}

namespace {

std::vector<cplx> draw_spectrum(const Grid& grid, const SpectrumSpec& spec, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto& kv = wavevectors(grid);
  const double lo2 = spec.k_lo * spec.k_lo;
  const double hi2 = spec.k_hi * spec.k_hi;
  std::vector<cplx> raw(grid.size());
  bool any = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double k2 = squared_magnitude(kv[i]);
    if (k2 < lo2 || k2 > hi2) continue;
    const double re = normal(rng);
    const double im = normal(rng);
    raw[i] = cplx(re, im) * (std::pow(k2, -0.5 * spec.decay) / std::sqrt(2.0));
    any = true;
  }
  if (!any) throw ArgumentError("spectrum band contains no lattice modes");
  // (G(k) + conj G(-k)) / sqrt(2) keeps the per-mode standard deviation and
  // makes the field real; scaling by n^{d/2} converts series coefficients to
  // the unitary DFT convention.
  const double scale = std::sqrt(static_cast<double>(grid.size()));
  std::vector<cplx> out(grid.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    out[i] = (raw[i] + std::conj(raw[grid.conjugate_index(i)])) * (scale / std::sqrt(2.0));
  return out;
}

}  // namespace

GridField random_scalar(const Grid& grid, const SpectrumSpec& spec) {
  spec.validate(grid);
  std::mt19937_64 rng(spec.seed);
  return dft_inverse(GridField(grid, Rep::spectral, draw_spectrum(grid, spec, rng), true));
}

VectorField random_vector(const Grid& grid, const SpectrumSpec& spec) {
  spec.validate(grid);
  std::mt19937_64 rng(spec.seed);
  std::vector<GridField> comps;
  for (int a = 0; a < grid.dim(); ++a)
    comps.emplace_back(grid, Rep::spectral, draw_spectrum(grid, spec, rng), true);
  return leray_project(VectorField(std::move(comps), false));
}

VectorField scaled_to_sup(const VectorField& u, double target) {
  const double sup = lp_norm(u, kInf);
  if (sup == 0.0) throw DegenerateInputError("cannot rescale a zero field");
  VectorField out = (target / sup) * u;
  out.div_free = u.div_free;
  return out;
}

}  // namespace lpflow
