#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "lpflow/errors.hpp"
#include "lpflow/euler.hpp"
#include "lpflow/paraproduct.hpp"
#include "lpflow/random_field.hpp"
#include "lpflow/spectral.hpp"

using namespace lpflow;

namespace {

double l2_distance(const GridField& a, const GridField& b) { return lp_norm(to_physical(a) - to_physical(b), 2.0); }

GridField scalar(const Grid& g, std::uint64_t seed, double k_hi = 10.0) {
  return random_scalar(g, {1.0, 1.0, k_hi, seed});
}

VectorField velocity(const Grid& g, std::uint64_t seed, double k_hi = 8.0) {
  return random_vector(g, {1.0, 1.0, k_hi, seed});
}

double sup_abs(const GridField& f) { return lp_norm(f, kInf); }

}  // namespace

TEST_CASE("bony pieces add up to the dealiased product") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = scalar(g, 2 * seed), h = scalar(g, 2 * seed + 1);
    const auto pieces = bony(bank, f, h);
    const auto fg = dealiased_product(f, h);
    const double err = l2_distance(pieces.T_fg + pieces.T_gf + pieces.R_fg, fg);
    CHECK(err <= 1e-10 * lp_norm(to_physical(fg), 2.0));
  }
}

TEST_CASE("bony pieces of a constant times a dyadic mode") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  const double c = 1.75;
  const auto f = GridField::constant(g, c);
  const auto mode = GridField::sample(g, [](auto x) { return std::cos(8.0 * x[0]); });
  const auto pieces = bony(bank, f, mode);
  const double scale = lp_norm(mode, 2.0);
  CHECK(l2_distance(pieces.T_fg, c * mode) <= 1e-12 * scale);
  CHECK(lp_norm(pieces.T_gf, 2.0) <= 1e-12 * scale);
  CHECK(lp_norm(pieces.R_fg, 2.0) <= 1e-12 * scale);
}

TEST_CASE("bony decomposition is symmetric for f = g") {
  const Grid g(2, 32);
  const LPFilterBank bank(g);
  const auto f = scalar(g, 11, 9.0);
  const auto pieces = bony(bank, f, f);
  CHECK(l2_distance(pieces.T_fg, pieces.T_gf) <= 1e-14 * lp_norm(pieces.T_fg, 2.0));
  CHECK_THROWS_AS(bony(bank, f, scalar(Grid(2, 16), 1, 4.0)), ArgumentError);
}

TEST_CASE("commutator vanishes for a constant transport field") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  const VectorField f({GridField::constant(g, 0.4), GridField::constant(g, -1.3)}, true);
  const auto h = scalar(g, 3);
  const auto seq = commutator_sequence(bank, f, h);
  for (const auto& c : seq.blocks) CHECK(sup_abs(c) <= 1e-13);
  CHECK(commutator_lhs(seq, 3.0, 1.0, 1.0) == 0.0);
  CHECK(verify_commutator_estimate(bank, f, h, NormSpec::tl(3.0, 1.0, 1.0, true), CommutatorForm::endpoint) == 0.0);
}

TEST_CASE("commutator is bilinear") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  const auto f = velocity(g, 5);
  const auto h = scalar(g, 6);
  const double ref = lp_norm(f, kInf) * lp_norm(gradient_components(VectorField({h}, false)), kInf);
  for (int j : {1, 3, 5}) {
    const auto c = commutator(bank, f, h, j);
    REQUIRE(sup_abs(c) > 0.0);
    CHECK(sup_abs(commutator(bank, -2.5 * f, h, j) - (-2.5) * c) <= 1e-12 * 2.5 * ref);
    CHECK(sup_abs(commutator(bank, f, 0.75 * h, j) - 0.75 * c) <= 1e-12 * 0.75 * ref);
  }
}

TEST_CASE("commutator vanishes above both bands") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  const auto f = velocity(g, 7, 3.0);
  const auto h = scalar(g, 8, 3.0);
  // frequencies of f . grad g stay below 6, so blocks from j = 5 on see nothing
  for (int j = 5; j <= bank.j_max(); ++j) CHECK(sup_abs(commutator(bank, f, h, j)) <= 1e-10);
  CHECK(sup_abs(commutator(bank, f, h, 1)) > 1e-3);
}

TEST_CASE("commutator matches a term-by-term evaluation") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  // f = (sin y, 0) is divergence free, g = cos(5x) has a single frequency
  const VectorField f({GridField::sample(g, [](auto x) { return std::sin(x[1]); }), GridField::zeros(g)}, true);
  const auto h = GridField::sample(g, [](auto x) { return std::cos(5.0 * x[0]); });
  const auto psi = bank.psi(2);
  const std::size_t k5 = g.flat_index({5, 0, 0});
  const double w5 = psi[k5];
  const std::size_t k51 = g.flat_index({5, 1, 0});
  const double w51 = psi[k51];
  // f . grad g = -5 sin(y) sin(5x); its modes sit at (+-5, +-1)
  const auto expect = GridField::sample(g, [&](auto x) { return -5.0 * std::sin(x[1]) * std::sin(5.0 * x[0]) * (w5 - w51); });
  const auto c = commutator(bank, f, h, 2);
  CHECK(sup_abs(c - expect) <= 1e-12);
  CHECK(w5 != w51);
}

TEST_CASE("commutator rejects compressible transport") {
  const Grid g(2, 32);
  const LPFilterBank bank(g);
  const VectorField f({GridField::sample(g, [](auto x) { return std::sin(x[0]); }), GridField::zeros(g)}, true);
  CHECK_THROWS_AS(commutator(bank, f, scalar(g, 1, 6.0), 1), ArgumentError);
  CHECK_THROWS_AS(commutator(bank, velocity(g, 1, 4.0), scalar(g, 1, 6.0), bank.j_max() + 1), ArgumentError);
}

TEST_CASE("Moser ratio with the identity factor and under scaling") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  const auto f = scalar(g, 21);
  const auto one = GridField::constant(g, 1.0);
  for (bool hom : {false, true}) {
    const auto spec = NormSpec::tl(3.0, 1.0, 1.0, hom);
    CHECK(verify_moser(bank, f, one, spec) <= 1.0 + 1e-12);
  }
  const auto spec = NormSpec::tl(2.5, 2.0, 2.0, true);
  const auto h = scalar(g, 22);
  const double r = verify_moser(bank, f, h, spec);
  CHECK(r > 0.0);
  CHECK(std::abs(verify_moser(bank, 3.0 * f, 0.2 * h, spec) - r) <= 1e-10 * r);
  CHECK_THROWS_AS(verify_moser(bank, f, GridField::zeros(g), spec), DegenerateInputError);
  CHECK_THROWS_AS(verify_moser(bank, f, h, NormSpec::tl(0.0, 2.0, 2.0)), ArgumentError);
}

TEST_CASE("transport Moser ratios") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  const auto u = velocity(g, 31);
  const VectorField konst({GridField::constant(g, 2.0)}, false);
  const auto spec = NormSpec::tl(0.0, 1.0, 2.0, true);
  CHECK(verify_moser_transport(bank, u, konst, spec, TransportForm::gradient) == 0.0);
  const VectorField v({scalar(g, 32)}, false);
  for (auto form : {TransportForm::gradient, TransportForm::split}) {
    const double r = verify_moser_transport(bank, u, v, spec, form);
    CHECK(r > 0.0);
    CHECK(std::abs(verify_moser_transport(bank, 4.0 * u, v, spec, form) - r) <= 1e-10 * r);
    CHECK(std::abs(verify_moser_transport(bank, u, 0.1 * v, spec, form) - r) <= 1e-10 * r);
  }
  CHECK_THROWS_AS(verify_moser_transport(bank, u, v, NormSpec::tl(-1.0, 1.0, 2.0), TransportForm::gradient),
                  ArgumentError);
}

TEST_CASE("commutator estimate ratios are scale invariant and finite") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  struct Case {
    NormSpec spec;
    CommutatorForm form;
  };
  const Case cases[] = {{NormSpec::tl(3.0, 1.0, 1.0, true), CommutatorForm::endpoint},
                        {NormSpec::tl(3.0, 1.0, 1.0, true), CommutatorForm::nonendpoint},
                        {NormSpec::tl(2.5, 2.0, 2.0, true), CommutatorForm::nonendpoint}};
  for (const auto& c : cases) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto f = velocity(g, 100 + seed);
      const auto h = scalar(g, 200 + seed);
      const double r = verify_commutator_estimate(bank, f, h, c.spec, c.form);
      REQUIRE(std::isfinite(r));
      CHECK(r > 0.0);
      worst = std::max(worst, r);
      const double r2 = verify_commutator_estimate(bank, 0.3 * f, 7.0 * h, c.spec, c.form);
      CHECK(std::abs(r2 - r) <= 1e-10 * r);
    }
    MESSAGE(c.spec.describe() << " worst ratio over 4 seeds: " << worst);
  }
  CHECK_THROWS_AS(verify_commutator_estimate(bank, velocity(g, 1), scalar(g, 2), NormSpec::tl(0.0, 1.0, 1.0),
                                             CommutatorForm::nonendpoint),
                  ArgumentError);
}

TEST_CASE("counterexample scan reports a well formed profile") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  const int scales[] = {1, 2, 3, 4};
  for (auto family : {ScanFamily::random, ScanFamily::lacunary, ScanFamily::modulated_bump}) {
    const auto rep = counterexample_scan(bank, family, 1.0, 1.0, 1.0, scales, 4);
    REQUIRE(rep.ratios.size() == 4);
    REQUIRE(rep.tables.at("profile").rows.size() == 4);
    for (double r : rep.ratios) CHECK(std::isfinite(r));
    CHECK(rep.to_json()["ratios"].size() == 4);
    MESSAGE(to_string(family) << " s=1 max/min " << rep.max() / rep.min());
  }
  CHECK(parse_scan_family("modulated-bump") == ScanFamily::modulated_bump);
  CHECK_THROWS_AS(parse_scan_family("takada"), ArgumentError);

  const auto dir = std::filesystem::temp_directory_path() / "lpflow_scan_test";
  std::filesystem::remove_all(dir);
  write_report(counterexample_scan(bank, ScanFamily::random, 1.0, 1.0, 1.0, scales, 4), dir);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "tables" / "profile.csv"));
  CHECK(std::filesystem::exists(dir / "plots" / "profile.svg"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("endpoint scan shows no growth across scales") {
  const Grid g(2, 64);
  const LPFilterBank bank(g);
  const int scales[] = {1, 2, 3, 4, 5};
  // in the proved regime the profile decreases, so only growth is ruled out
  for (auto family : {ScanFamily::lacunary, ScanFamily::modulated_bump, ScanFamily::random}) {
    const auto rep = counterexample_scan(bank, family, 3.0, 1.0, 1.0, scales, 9);
    MESSAGE(to_string(family) << " s=3 max/min " << rep.max() / rep.min() << ", max/first "
                              << rep.max() / rep.ratios.front());
    CHECK(rep.max() <= 4.0 * rep.ratios.front());
  }
}
