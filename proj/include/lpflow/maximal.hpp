#pragma once

#include <span>
#include <vector>

#include "lpflow/filter_bank.hpp"

namespace lpflow {

enum class Window { cube, ball };

/// Radii (physical lengths) of the averaging windows. The single-cell window
/// is always included, so Mf >= |f| pointwise.
struct MaximalConfig {
  std::vector<double> radii;
  Window window = Window::cube;

  /// pi * 2^{-j} for j = 0, 1, ... down to the grid spacing, ascending.
  static MaximalConfig dyadic(const Grid& grid, Window window = Window::cube);
  void validate(const Grid& grid) const;
};

/// Centered maximal function of |f| over the configured windows, periodic.
GridField hl_maximal(const GridField& f, const MaximalConfig& cfg);
/// Same on raw nonnegative samples.
std::vector<double> hl_maximal(const Grid& grid, std::span<const double> values, const MaximalConfig& cfg);

/// max_x |Delta_k f|(x) / (2^{(j-k) theta d / r} M(|f|^{1-theta})(x) M(|f|^r)(x)^{theta/r}).
/// f must have spectral support in |xi| <= 2^{j+1} and j > k - 5.
double verify_pointwise_bound(const LPFilterBank& bank, const GridField& f, int j, int k, double theta, double r,
                              const MaximalConfig& cfg);

/// max_x sup_y |f(x-y)| / (1 + |2^j y|^{d/r}) divided by M(|f|^r)(x)^{1/r}.
/// Brute force over all displacements y (minimal periodic image).
double peetre_ratio(const GridField& f, int j, double r, const MaximalConfig& cfg);

/// Radial profiles with a radially decreasing integrable majorant.
struct RadialProfile {
  enum class Kind { gaussian, poisson, power_law };
  Kind kind = Kind::gaussian;
  double exponent = 0.0;  // power law (1 + |x|)^{-exponent}

  static RadialProfile gaussian() { return {Kind::gaussian, 0.0}; }
  static RadialProfile poisson() { return {Kind::poisson, 0.0}; }
  static RadialProfile power_law(double a) { return {Kind::power_law, a}; }

  /// Profile value at radius rho in R^d.
  double operator()(double rho, int d) const;
  /// ||g||_{L^1(R^d)} of the majorant (the profile itself, which is radial
  /// decreasing). Throws ArgumentError when not integrable.
  double l1_norm(int d) const;
};

/// max over x and eps of |psi_eps * f|(x) / (||g||_1 Mf(x)), with
/// psi_eps(x) = eps^{-d} psi(x / eps) restricted to the fundamental cell.
double verify_radial_majorant(const RadialProfile& psi, const GridField& f, std::span<const double> eps,
                              const MaximalConfig& cfg);

/// ||(sum_j (M f_j)^q)^{1/q}||_p / ||(sum_j |f_j|^q)^{1/q}||_p, p in (1, inf), q in (1, inf].
double verify_fefferman_stein(std::span<const GridField> fields, double p, double q, const MaximalConfig& cfg);

}  // namespace lpflow
