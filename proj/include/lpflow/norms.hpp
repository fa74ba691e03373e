#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "lpflow/filter_bank.hpp"

namespace lpflow {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Flavor { triebel_lizorkin, besov };

/// Parameters selecting F^s_{p,q}, B^s_{p,q} or their homogeneous versions.
/// p and q are in [1, inf]; infinity is kInf. TL norms need p < inf.
struct NormSpec {
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;
  bool homogeneous = false;
  Flavor flavor = Flavor::triebel_lizorkin;

  static NormSpec tl(double s, double p, double q, bool homogeneous = false) {
    return {s, p, q, homogeneous, Flavor::triebel_lizorkin};
  }
  static NormSpec besov(double s, double p, double q, bool homogeneous = false) {
    return {s, p, q, homogeneous, Flavor::besov};
  }
  NormSpec with_s(double new_s) const {
    NormSpec out = *this;
    out.s = new_s;
    return out;
  }

  void validate() const;
  /// e.g. "F^3_{1,1}" or "hom B^0_{inf,1}".
  std::string describe() const;
};

/// Quadrature L^p norm, weight (2*pi/n)^d; p = inf is the sample max.
double lp_norm(const GridField& f, double p);
/// Vector-valued L^p norm of the pointwise Euclidean magnitude.
double lp_norm(std::span<const GridField> components, double p);
double lp_norm(const VectorField& u, double p);

/// ||(|P_{<=0} f|^q + sum_j 2^{jsq} |Delta_j f|^q)^{1/q}||_{L^p}; the
/// homogeneous variant drops the low part (and with it the zero mode).
double tl_norm(const LPFilterBank& bank, const GridField& f, const NormSpec& spec);
double tl_norm(const LPFilterBank& bank, std::span<const GridField> components, const NormSpec& spec);
double tl_norm(const LPFilterBank& bank, const VectorField& u, const NormSpec& spec);

/// (||P_{<=0} f||_p^q + sum_j 2^{jsq} ||Delta_j f||_p^q)^{1/q}.
double besov_norm(const LPFilterBank& bank, const GridField& f, const NormSpec& spec);
double besov_norm(const LPFilterBank& bank, std::span<const GridField> components, const NormSpec& spec);
double besov_norm(const LPFilterBank& bank, const VectorField& u, const NormSpec& spec);

/// Dispatches on spec.flavor.
double norm(const LPFilterBank& bank, const GridField& f, const NormSpec& spec);
double norm(const LPFilterBank& bank, std::span<const GridField> components, const NormSpec& spec);
double norm(const LPFilterBank& bank, const VectorField& u, const NormSpec& spec);

/// Pointwise block magnitudes |P_{<=0} f|(x) and |Delta_j f|(x); for several
/// components the Euclidean magnitude across components.
struct BlockMagnitudes {
  std::vector<double> low;
  std::vector<std::vector<double>> blocks;
};
BlockMagnitudes block_magnitudes(const LPFilterBank& bank, std::span<const GridField> components);

/// A ratio together with its reciprocal, for two-sided equivalences.
struct RatioPair {
  double ratio = 0.0;
  double inverse = 0.0;
};

/// r = ||f||_{F^s_{p,q}} / (||f||_{L^p} + ||f||_{hom F^s_{p,q}}), s > 0.
RatioPair verify_equivalence(const LPFilterBank& bank, const GridField& f, double s, double p, double q);

/// ||f||_{hom B^{s1}_{p1,p0}} / ||f||_{hom F^{s0}_{p0,q0}} with s0 - d/p0 = s1 - d/p1, p0 < p1.
double verify_embedding(const LPFilterBank& bank, const GridField& f, double s0, double p0, double q0, double s1,
                        double p1);

/// ||f||_{hom F^{s+k}} / ||D^k f||_{hom F^s}, D = sqrt(-Laplacian), k in {1, 2}.
RatioPair verify_lifting(const LPFilterBank& bank, const GridField& f, double s, double p, double q, int k);

/// |xi|^k on the lattice (Nyquist kept: the multiplier is even).
GridField fractional_derivative(const GridField& f, int k);

/// Dyadic sum for ||F^{-1}(m(xi) xi_i)||_{L^1}, m the symbol of
/// P_{<=0} (-Laplacian)^{-1} d_l d_k, evaluated on an auxiliary R^d box of
/// side 2^refinement. Axes l, k, i are 1-based.
struct KernelL1Result {
  std::vector<int> levels;         // j = 0, -1, -2, ...
  std::vector<double> terms;       // 2^j ||F^{-1}(m(2^j xi) psi(xi) xi_i)||_{L^1}
  double value = 0.0;              // partial sum
  double tail_bound = 0.0;         // geometric bound on the omitted terms
};
KernelL1Result kernel_l1_bound(const CutoffProfile& profile, int d, int l, int k, int i, int refinement);

/// Per-sample ratio record shared by the verification suites.
struct RatioReport {
  std::string estimate_id;
  std::vector<NormSpec> specs;
  std::vector<std::string> samples;
  std::vector<double> ratios;
  std::uint64_t seed = 0;

  double max() const;
  double min() const;
  double median() const;
};

}  // namespace lpflow
