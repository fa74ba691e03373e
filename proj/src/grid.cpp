#include "lpflow/grid.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "lpflow/errors.hpp"

namespace lpflow {

Grid::Grid(int d, int n) : d_(d), n_(n) {
  if (d != 2 && d != 3) throw ArgumentError("grid dimension must be 2 or 3, got " + std::to_string(d));
  if (n < 8 || !std::has_single_bit(static_cast<unsigned>(n)))
    throw ArgumentError("grid size must be a power of two >= 8, got " + std::to_string(n));
  size_ = 1;
  for (int a = 0; a < d; ++a) size_ *= static_cast<std::size_t>(n);
}

double Grid::cell_volume() const noexcept { return std::pow(spacing(), d_); }

std::array<int, 3> Grid::multi_index(std::size_t flat) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = d_ - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
  return idx;
}

std::array<int, 3> Grid::wavevector(std::size_t flat) const noexcept {
  auto idx = multi_index(flat);
  for (int a = 0; a < d_; ++a) idx[static_cast<std::size_t>(a)] = wavenumber(idx[static_cast<std::size_t>(a)]);
  return idx;
}

std::size_t Grid::flat_index(const std::array<int, 3>& idx) const noexcept {
  std::size_t flat = 0;
  for (int a = 0; a < d_; ++a) {
    int i = idx[static_cast<std::size_t>(a)] % n_;
    if (i < 0) i += n_;
    flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  }
  return flat;
}

std::size_t Grid::conjugate_index(std::size_t flat) const noexcept {
  auto idx = multi_index(flat);
  for (int a = 0; a < d_; ++a) idx[static_cast<std::size_t>(a)] = -idx[static_cast<std::size_t>(a)];
  return flat_index(idx);
}

std::array<double, 3> Grid::coordinates(std::size_t flat) const noexcept {
  const auto idx = multi_index(flat);
  const double h = spacing();
  return {idx[0] * h, idx[1] * h, idx[2] * h};
}

double squared_magnitude(const std::array<int, 3>& k) noexcept {
  return double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
}

}  // namespace lpflow

#include <map>
#include <memory>
#include <mutex>

namespace lpflow {

const std::vector<std::array<int, 3>>& wavevectors(const Grid& grid) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<std::vector<std::array<int, 3>>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{grid.dim(), grid.n()}];
  if (!slot) {
    slot = std::make_unique<std::vector<std::array<int, 3>>>(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) (*slot)[i] = grid.wavevector(i);
  }
  return *slot;
}

}  // namespace lpflow
