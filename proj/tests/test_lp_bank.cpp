#include <doctest.h>

#include <cmath>

#include "lpflow/errors.hpp"
#include "lpflow/filter_bank.hpp"
#include "lpflow/norms.hpp"
#include "lpflow/random_field.hpp"
#include "lpflow/spectral.hpp"

using namespace lpflow;

namespace {

double rel_l2(const GridField& a, const GridField& b) {
  const double nb = std::sqrt(physical_energy(to_physical(b)));
  return std::sqrt(physical_energy(to_physical(a - b))) / (nb == 0.0 ? 1.0 : nb);
}

double l2(const GridField& a) { return std::sqrt(physical_energy(to_physical(a))); }

GridField cos_mode(const Grid& g, int k, int axis = 0) {
  return GridField::sample(g, [=](auto x) { return 2.0 * std::cos(k * x[axis]); });
}

}  // namespace

TEST_CASE("cutoff profile plateau and support") {
  const auto chi = CutoffProfile::smooth_step();
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(0.4) == 1.0);
  CHECK(chi(0.5) == 1.0);
  CHECK(chi(1.0) == 0.0);
  CHECK(chi(1.5) == 0.0);
  for (double r = 0.0; r <= 1.2; r += 0.01) {
    CHECK(chi(r) >= 0.0);
    CHECK(chi(r) <= 1.0);
    CHECK(chi(r + 0.01) <= chi(r));
  }
}

TEST_CASE("filter bank layout, partition of unity and psi identity") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  CHECK(bank.j_max() == 7);
  const auto chi = bank.profile();
  const auto mags = bank.magnitudes();
  double residual = 0.0, psi_err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double sum = bank.phi0()[i];
    for (int j = 0; j <= bank.j_max(); ++j) {
      sum += bank.psi(j)[i];
      const double expect = chi(mags[i] / std::exp2(j + 1)) - chi(mags[i] / std::exp2(j));
      psi_err = std::max(psi_err, std::abs(bank.psi(j)[i] - expect));
    }
    residual = std::max(residual, std::abs(sum - 1.0));
  }
  CHECK(residual <= 1e-14);
  CHECK(psi_err <= 1e-14);
  CHECK_THROWS_AS(bank.psi(-1), ArgumentError);
  CHECK_THROWS_AS(bank.psi(8), ArgumentError);
  // psi_0 at |xi| = 1 is forced to 1.
  CHECK(bank.psi(0)[g.flat_index({1, 0, 0})] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pure modes land in a single block") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  for (int j = 1; j <= 4; ++j) {
    const GridField f = cos_mode(g, 1 << j);
    CHECK(rel_l2(delta_j(bank, f, j), f) <= 1e-13);
    for (int jj = 0; jj <= bank.j_max(); ++jj)
      if (std::abs(jj - j) >= 1) CHECK(l2(delta_j(bank, f, jj)) <= 1e-13 * l2(f));
    const auto dec = decompose(bank, f);
    int nonzero = 0;
    for (const auto& b : dec.blocks) nonzero += l2(b) > 1e-12 * l2(f) ? 1 : 0;
    CHECK(nonzero == 1);
  }
}

TEST_CASE("constants, telescoping and reconstruction") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  const GridField c = GridField::constant(g, 2.5);
  for (int j = 0; j <= bank.j_max(); ++j) CHECK(l2(delta_j(bank, c, j)) <= 1e-13);
  CHECK(rel_l2(p_le(bank, c, 0), c) <= 1e-15);

  const GridField f = random_scalar(g, {1.0, 1.0, 30.0, 17});
  for (int j = 0; j <= bank.j_max(); ++j) {
    const GridField tele = p_le(bank, f, j + 1) - p_le(bank, f, j);
    CHECK(l2(delta_j(bank, f, j) - tele) <= 1e-13 * l2(f));
  }
  CHECK(rel_l2(recompose(decompose(bank, f)), f) <= 1e-11);

  const auto zero_dec = decompose(bank, GridField::zeros(g));
  for (const auto& b : zero_dec.blocks) CHECK(l2(b) == 0.0);
  CHECK_THROWS_AS(delta_j(LPFilterBank(Grid(2, 32)), f, 0), ArgumentError);
}

TEST_CASE("annulus support and almost orthogonality") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  const GridField f = random_scalar(g, {0.0, 1.0, 30.0, 4});
  const auto mags = bank.magnitudes();
  for (int j = 0; j <= bank.j_max(); ++j) {
    const GridField b = to_spectral(delta_j(bank, f, j));
    double bmax = 0.0;
    for (auto x : b.values()) bmax = std::max(bmax, std::abs(x));
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (std::abs(b[i]) <= 1e-13 * bmax) continue;
      CHECK(mags[i] >= std::exp2(j - 1));
      CHECK(mags[i] <= std::exp2(j + 1));
    }
    CHECK(l2(b) <= l2(f) * (1.0 + 1e-14));
    for (int jj = 0; jj <= bank.j_max(); ++jj)
      if (std::abs(j - jj) >= 2) CHECK(l2(delta_j(bank, b, jj)) <= 1e-13 * l2(f));
  }
}

TEST_CASE("low-pass commutes with derivatives") {
  const Grid g(2, 32);
  const LPFilterBank bank(g);
  const GridField f = random_scalar(g, {1.0, 1.0, 14.0, 8});
  for (int m = 0; m <= 4; ++m) {
    const GridField a = derivative(p_le(bank, f, m), 1);
    const GridField b = p_le(bank, derivative(f, 1), m);
    CHECK(l2(a - b) <= 1e-12 * l2(derivative(f, 1)));
  }
  CHECK_THROWS_AS(p_le(bank, f, -1), ArgumentError);
}

TEST_CASE("low frequency Bernstein bound") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  // Pure mode |k| = 2^j with j <= m - 1: ratio = 2^(j - m).
  for (int j = 1; j <= 2; ++j) {
    const int m = 3;
    const double r = verify_low_freq_bound(bank, cos_mode(g, 1 << j), 2.0, 2.0, 2.0, m, 1);
    CHECK(r == doctest::Approx(std::exp2(j - m)).epsilon(1e-10));
  }
  const GridField f = random_scalar(g, {1.0, 1.0, 30.0, 2});
  CHECK(verify_low_freq_bound(bank, f, 2.0, 2.0, 2.0, 12, 0) <= 1.0 + 1e-10);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const GridField h = random_scalar(g, {1.0, 1.0, 30.0, seed});
    worst = std::max(worst, verify_low_freq_bound(bank, h, 2.0, 2.0, 2.0, 3, 1));
  }
  CHECK(worst <= 4.0);
  CHECK_THROWS_AS(verify_low_freq_bound(bank, GridField::zeros(g), 2.0, 2.0, 2.0, 3, 1), DegenerateInputError);
}
