#include "lpflow/filter_bank.hpp"

#include <cmath>

#include "lpflow/errors.hpp"
#include "lpflow/norms.hpp"
#include "lpflow/spectral.hpp"

namespace lpflow {

namespace {

double smooth_h(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double CutoffProfile::operator()(double r) const {
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  const double a = smooth_h(2.0 - 2.0 * r);
  const double b = smooth_h(2.0 * r - 1.0);
  return a / (a + b);
}

LPFilterBank::LPFilterBank(const Grid& grid, CutoffProfile profile) : grid_(grid), profile_(profile) {
  const double max_radius = std::sqrt(static_cast<double>(grid.dim())) * grid.n() / 2.0;
  j_max_ = static_cast<int>(std::ceil(std::log2(max_radius))) + 1;

  const auto& kv = wavevectors(grid);
  magnitude_.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) magnitude_[i] = std::sqrt(squared_magnitude(kv[i]));

  low_pass_.resize(static_cast<std::size_t>(j_max_) + 2);
  for (int m = 0; m <= j_max_ + 1; ++m) {
    auto& phi = low_pass_[static_cast<std::size_t>(m)];
    phi.resize(grid.size());
    const double scale = std::ldexp(1.0, -m);
    for (std::size_t i = 0; i < grid.size(); ++i) phi[i] = profile_(magnitude_[i] * scale);
  }
  psi_.resize(static_cast<std::size_t>(j_max_) + 1);
  for (int j = 0; j <= j_max_; ++j) {
    auto& psi = psi_[static_cast<std::size_t>(j)];
    const auto& hi = low_pass_[static_cast<std::size_t>(j) + 1];
    const auto& lo = low_pass_[static_cast<std::size_t>(j)];
    psi.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) psi[i] = hi[i] - lo[i];
  }
  mean_only_.assign(grid.size(), 0.0);
  mean_only_[0] = 1.0;
  ones_.assign(grid.size(), 1.0);
}

std::span<const double> LPFilterBank::psi(int j) const {
  if (j < 0 || j > j_max_)
    throw ArgumentError("block index " + std::to_string(j) + " outside [0, " + std::to_string(j_max_) + "]");
  return psi_[static_cast<std::size_t>(j)];
}

std::span<const double> LPFilterBank::low_pass(int m) const {
  if (m < 0) return mean_only_;
  if (m > j_max_ + 1) return ones_;
  return low_pass_[static_cast<std::size_t>(m)];
}

namespace {

void check_grid(const LPFilterBank& bank, const GridField& f) {
  if (!(bank.grid() == f.grid())) throw ArgumentError("field grid does not match the filter bank grid");
}

}  // namespace

GridField delta_j(const LPFilterBank& bank, const GridField& f, int j) {
  check_grid(bank, f);
  return apply_multiplier(f, bank.psi(j));
}

GridField p_le(const LPFilterBank& bank, const GridField& f, int m) {
  check_grid(bank, f);
  if (m < 0) throw ArgumentError("p_le requires m >= 0");
  if (m > bank.j_max()) return f;
  return apply_multiplier(f, bank.low_pass(m));
}

VectorField p_le(const LPFilterBank& bank, const VectorField& u, int m) {
  std::vector<GridField> c;
  for (const auto& comp : u.components) c.push_back(p_le(bank, comp, m));
  return VectorField(std::move(c), u.div_free);
}

DyadicDecomposition decompose(const LPFilterBank& bank, const GridField& f) {
  check_grid(bank, f);
  const GridField spec = to_spectral(f);
  auto back = [&](GridField g) { return f.rep() == Rep::spectral ? g : dft_inverse(g); };
  DyadicDecomposition dec;
  dec.low = back(apply_multiplier(spec, bank.phi0()));
  for (int j = 0; j <= bank.j_max(); ++j) dec.blocks.push_back(back(apply_multiplier(spec, bank.psi(j))));
  return dec;
}

GridField recompose(const DyadicDecomposition& dec) {
  GridField sum = dec.low;
  for (const auto& b : dec.blocks) sum = sum + b;
  return sum;
}

double verify_low_freq_bound(const LPFilterBank& bank, const GridField& f, double s, double p, double q, int m,
                             int l) {
  if (m < 0 || l < 0) throw ArgumentError("verify_low_freq_bound requires m, l >= 0");
  const double denom = std::ldexp(1.0, m * l) * tl_norm(bank, f, NormSpec::tl(s, p, q));
  if (denom == 0.0) throw DegenerateInputError("zero field in verify_low_freq_bound");
  return tl_norm(bank, p_le(bank, f, m), NormSpec::tl(s + l, p, q)) / denom;
}

}  // namespace lpflow
