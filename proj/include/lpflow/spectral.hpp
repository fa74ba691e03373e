#pragma once

#include <functional>
#include <span>

#include "lpflow/field.hpp"

namespace lpflow {

/// Unitary forward DFT: F(k) = n^{-d/2} sum_x f(x) e^{-i k.x}.
/// Parseval then reads sum |f|^2 h^d = sum |F|^2 h^d with h = 2*pi/n.
GridField dft_forward(const GridField& f);
/// Inverse of dft_forward. Real fields come back with exactly zero imaginary part.
GridField dft_inverse(const GridField& F);

/// Representation-agnostic conversions (no-op when already there).
GridField to_spectral(const GridField& f);
GridField to_physical(const GridField& f);
VectorField to_spectral(const VectorField& u);
VectorField to_physical(const VectorField& u);

/// Multiplies the spectrum by a real lattice multiplier; output keeps the
/// input's representation. The multiplier must have grid.size() entries.
GridField apply_multiplier(const GridField& f, std::span<const double> multiplier);

/// Spectral d/dx_axis. The Nyquist wavenumber along `axis` is zeroed.
GridField derivative(const GridField& f, int axis);

/// 2/3-rule truncation: zero every mode with some |k_i| > n/3.
GridField dealias(const GridField& f);

/// Alias-free pointwise product: both factors truncated, multiplied in
/// physical space, result truncated. Returned in physical representation.
GridField dealiased_product(const GridField& a, const GridField& b);

/// max_k |sum_i k_i u_i(k)| relative to max_k |u(k)| (0 for the zero field).
double relative_divergence(const VectorField& u);
/// Numerical div-free test at the field_core tolerance (1e-10 relative).
bool is_div_free(const VectorField& u, double tol = 1e-10);

/// Parseval check helper: (2*pi/n)^d * sum_k |F(k)|^2.
double spectral_energy(const GridField& F);

/// Plain pointwise L2 norm squared with the Riemann weight.
double physical_energy(const GridField& f);

/// In-place FFT on raw storage; sign -1 forward, +1 inverse, unnormalized.
void fft_inplace(const Grid& grid, std::span<cplx> data, int sign);

}  // namespace lpflow
