#include "lpflow/field.hpp"

#include "lpflow/errors.hpp"
#include "lpflow/spectral.hpp"

namespace lpflow {

GridField::GridField(const Grid& grid, Rep rep, std::vector<cplx> values, bool is_real)
    : grid_(grid), rep_(rep), values_(std::move(values)), is_real_(is_real) {
  if (values_.size() != grid_.size())
    throw ArgumentError("field has " + std::to_string(values_.size()) + " samples, grid needs " +
                        std::to_string(grid_.size()));
}

GridField GridField::zeros(const Grid& grid, Rep rep) {
  return GridField(grid, rep, std::vector<cplx>(grid.size()), true);
}

GridField GridField::constant(const Grid& grid, double value) {
  return GridField(grid, Rep::physical, std::vector<cplx>(grid.size(), cplx(value)), true);
}

GridField GridField::from_real(const Grid& grid, std::span<const double> values) {
  std::vector<cplx> v(values.begin(), values.end());
  return GridField(grid, Rep::physical, std::move(v), true);
}

namespace {

GridField like(const GridField& b, Rep rep) { return rep == Rep::spectral ? to_spectral(b) : to_physical(b); }

template <class Op>
GridField combine(const GridField& a, const GridField& b, Op op) {
  if (!(a.grid() == b.grid())) throw ArgumentError("fields live on different grids");
  const GridField bb = b.rep() == a.rep() ? b : like(b, a.rep());
  std::vector<cplx> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], bb[i]);
  return GridField(a.grid(), a.rep(), std::move(v), a.is_real() && b.is_real());
}

}  // namespace

GridField operator+(const GridField& a, const GridField& b) {
  return combine(a, b, [](cplx x, cplx y) { return x + y; });
}

GridField operator-(const GridField& a, const GridField& b) {
  return combine(a, b, [](cplx x, cplx y) { return x - y; });
}

GridField operator*(double c, const GridField& a) {
  std::vector<cplx> v(a.values().begin(), a.values().end());
  for (auto& x : v) x *= c;
  return GridField(a.grid(), a.rep(), std::move(v), a.is_real());
}

GridField operator*(cplx c, const GridField& a) {
  std::vector<cplx> v(a.values().begin(), a.values().end());
  for (auto& x : v) x *= c;
  return GridField(a.grid(), a.rep(), std::move(v), a.is_real() && c.imag() == 0.0);
}

VectorField::VectorField(std::vector<GridField> comps, bool div_free_flag)
    : components(std::move(comps)), div_free(div_free_flag) {
  if (components.empty()) throw ArgumentError("vector field needs at least one component");
  for (const auto& c : components)
    if (!(c.grid() == components.front().grid())) throw ArgumentError("vector components on different grids");
}

VectorField VectorField::zeros(const Grid& grid, Rep rep) {
  std::vector<GridField> comps(static_cast<std::size_t>(grid.dim()), GridField::zeros(grid, rep));
  return VectorField(std::move(comps), true);
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  if (a.dim() != b.dim()) throw ArgumentError("vector fields differ in component count");
  std::vector<GridField> c;
  for (int i = 0; i < a.dim(); ++i) c.push_back(a[i] + b[i]);
  return VectorField(std::move(c), a.div_free && b.div_free);
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  if (a.dim() != b.dim()) throw ArgumentError("vector fields differ in component count");
  std::vector<GridField> c;
  for (int i = 0; i < a.dim(); ++i) c.push_back(a[i] - b[i]);
  return VectorField(std::move(c), a.div_free && b.div_free);
}

VectorField operator*(double s, const VectorField& a) {
  std::vector<GridField> c;
  for (const auto& comp : a.components) c.push_back(s * comp);
  return VectorField(std::move(c), a.div_free);
}

}  // namespace lpflow
