#pragma once

#include <cstdint>

#include "lpflow/field.hpp"

namespace lpflow {

/// Random test-field spectrum: std |k|^-decay inside k_lo <= |k| <= k_hi.
struct SpectrumSpec {
  double decay = 0.0;
  double k_lo = 1.0;
  double k_hi = 4.0;
  std::uint64_t seed = 0;

  void validate(const Grid& grid) const;
};

/// Real scalar field whose Fourier-series coefficients are independent
/// complex Gaussians with standard deviation |k|^-decay in the band,
/// Hermitian symmetrized. Deterministic in (grid, spec). Physical rep.
GridField random_scalar(const Grid& grid, const SpectrumSpec& spec);

/// d independent draws, Leray-projected (div_free set). Spectral rep.
VectorField random_vector(const Grid& grid, const SpectrumSpec& spec);

/// Rescales u so that its pointwise Euclidean maximum equals target.
VectorField scaled_to_sup(const VectorField& u, double target);

}  // namespace lpflow
