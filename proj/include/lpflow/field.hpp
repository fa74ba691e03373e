#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lpflow/grid.hpp"

namespace lpflow {

using cplx = std::complex<double>;

enum class Rep : std::uint8_t { physical, spectral };

/// Sampled periodic field (one scalar or one vector component).
///
/// Values are immutable once constructed; every operation returns a new field.
/// `is_real` asserts a real physical field, i.e. a Hermitian spectrum.
class GridField {
 public:
  GridField() = default;
  GridField(const Grid& grid, Rep rep, std::vector<cplx> values, bool is_real);

  static GridField zeros(const Grid& grid, Rep rep = Rep::physical);
  static GridField constant(const Grid& grid, double value);
  static GridField from_real(const Grid& grid, std::span<const double> values);

  /// Samples `fn(x)` at every grid point; fn receives std::array<double,3>.
  template <class Fn>
  static GridField sample(const Grid& grid, Fn&& fn);

  const Grid& grid() const noexcept { return grid_; }
  Rep rep() const noexcept { return rep_; }
  bool is_real() const noexcept { return is_real_; }
  std::span<const cplx> values() const noexcept { return values_; }
  const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Moves the sample vector out, leaving the field empty.
  std::vector<cplx> release() && { return std::move(values_); }

 private:
  Grid grid_;
  Rep rep_ = Rep::physical;
  std::vector<cplx> values_;
  bool is_real_ = true;
};

template <class Fn>
GridField GridField::sample(const Grid& grid, Fn&& fn) {
  std::vector<cplx> v(grid.size());
  bool real = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = cplx(fn(grid.coordinates(i)));
    if (v[i].imag() != 0.0) real = false;
  }
  return GridField(grid, Rep::physical, std::move(v), real);
}

/// Arithmetic converts the right operand to the left operand's representation.
GridField operator+(const GridField& a, const GridField& b);
GridField operator-(const GridField& a, const GridField& b);
GridField operator*(double c, const GridField& a);
GridField operator*(cplx c, const GridField& a);

/// d components on one grid.
struct VectorField {
  std::vector<GridField> components;
  bool div_free = false;

  VectorField() = default;
  VectorField(std::vector<GridField> comps, bool div_free_flag);

  int dim() const noexcept { return static_cast<int>(components.size()); }
  const Grid& grid() const { return components.front().grid(); }
  const GridField& operator[](int i) const { return components[static_cast<std::size_t>(i)]; }

  static VectorField zeros(const Grid& grid, Rep rep = Rep::spectral);
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double c, const VectorField& a);

}  // namespace lpflow
