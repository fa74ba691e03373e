#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace lpflow {

/// Periodic grid on [0, 2*pi)^d with n samples per axis.
///
/// Flat indices are row-major with axis 0 slowest. Spectral index i along an
/// axis maps to the wavenumber i for i <= n/2 and i - n otherwise, so the
/// lattice is {-n/2+1, ..., n/2}^d and the Nyquist wavenumber is +n/2.
class Grid {
 public:
  static constexpr double kLength = 2.0 * std::numbers::pi;

  Grid() = default;
  Grid(int d, int n);

  int dim() const noexcept { return d_; }
  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return kLength / n_; }
  double cell_volume() const noexcept;
  /// Largest wavenumber kept per axis by the 2/3 dealiasing rule.
  int dealias_cutoff() const noexcept { return n_ / 3; }

  int wavenumber(int index) const noexcept { return index <= n_ / 2 ? index : index - n_; }
  bool is_nyquist(int k) const noexcept { return k == n_ / 2; }

  /// Integer wavevector of a flat spectral index; unused trailing axes are 0.
  std::array<int, 3> wavevector(std::size_t flat) const noexcept;
  /// Grid-point multi-index of a flat index; unused trailing axes are 0.
  std::array<int, 3> multi_index(std::size_t flat) const noexcept;
  std::size_t flat_index(const std::array<int, 3>& idx) const noexcept;
  /// Flat index of the mode -k (the Hermitian partner of flat).
  std::size_t conjugate_index(std::size_t flat) const noexcept;
  /// Physical coordinates of a grid point.
  std::array<double, 3> coordinates(std::size_t flat) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int d_ = 2;
  int n_ = 8;
  std::size_t size_ = 64;
};

double squared_magnitude(const std::array<int, 3>& k) noexcept;

}  // namespace lpflow

#include <vector>

namespace lpflow {

/// Cached wavevector table for a grid shape, indexed by flat spectral index.
const std::vector<std::array<int, 3>>& wavevectors(const Grid& grid);

}  // namespace lpflow
