#pragma once

#include <span>
#include <vector>

#include "lpflow/field.hpp"

namespace lpflow {

/// Radial cutoff chi with phi(xi) = chi(|xi|): chi = 1 on [0, 1/2], 0 on [1, inf).
class CutoffProfile {
 public:
  enum class Kind { smooth_step };

  /// t -> h(2-2t) / (h(2-2t) + h(2t-1)), h(t) = exp(-1/t) for t > 0.
  static CutoffProfile smooth_step() { return CutoffProfile(Kind::smooth_step); }

  double operator()(double r) const;
  Kind kind() const noexcept { return kind_; }

 private:
  explicit CutoffProfile(Kind kind) : kind_(kind) {}
  Kind kind_;
};

/// Dyadic multipliers on the lattice of one grid.
///
/// phi_m(xi) = phi(xi / 2^m) is stored for 0 <= m <= j_max + 1 and
/// psi_j = phi_{j+1} - phi_j for 0 <= j <= j_max. j_max is chosen so that
/// phi_{j_max+1} == 1 on the whole lattice, making recomposition exact.
class LPFilterBank {
 public:
  explicit LPFilterBank(const Grid& grid, CutoffProfile profile = CutoffProfile::smooth_step());

  const Grid& grid() const noexcept { return grid_; }
  int j_max() const noexcept { return j_max_; }
  const CutoffProfile& profile() const noexcept { return profile_; }

  std::span<const double> phi0() const noexcept { return low_pass_.front(); }
  std::span<const double> psi(int j) const;
  /// phi_m for any integer m. For m < 0 only the zero mode survives on the
  /// integer lattice; for m > j_max + 1 the multiplier is identically one.
  std::span<const double> low_pass(int m) const;
  /// Euclidean |k| per flat index.
  std::span<const double> magnitudes() const noexcept { return magnitude_; }

 private:
  Grid grid_;
  CutoffProfile profile_;
  int j_max_ = 0;
  std::vector<double> magnitude_;
  std::vector<std::vector<double>> low_pass_;  // m = 0 .. j_max + 1
  std::vector<std::vector<double>> psi_;       // j = 0 .. j_max
  std::vector<double> mean_only_;
  std::vector<double> ones_;
};

/// P_{<=0} f plus the blocks Delta_j f, 0 <= j <= j_max, in f's representation.
struct DyadicDecomposition {
  GridField low;
  std::vector<GridField> blocks;
};

GridField delta_j(const LPFilterBank& bank, const GridField& f, int j);
/// S_m = P_{<=m}; m >= 0. Returns f unchanged for m >= j_max + 1.
GridField p_le(const LPFilterBank& bank, const GridField& f, int m);
VectorField p_le(const LPFilterBank& bank, const VectorField& u, int m);

DyadicDecomposition decompose(const LPFilterBank& bank, const GridField& f);
GridField recompose(const DyadicDecomposition& dec);

struct NormSpec;

/// ||P_{<=m} f||_{F^{s+l}_{p,q}} / (2^{ml} ||f||_{F^s_{p,q}}) (inhomogeneous TL norms).
double verify_low_freq_bound(const LPFilterBank& bank, const GridField& f, double s, double p, double q, int m, int l);

}  // namespace lpflow
