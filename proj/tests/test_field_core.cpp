#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "lpflow/errors.hpp"
#include "lpflow/field_io.hpp"
#include "lpflow/random_field.hpp"
#include "lpflow/spectral.hpp"

using namespace lpflow;

namespace {

double max_abs_diff(const GridField& a, const GridField& b) {
  const GridField pa = to_physical(a), pb = to_physical(b);
  double m = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) m = std::max(m, std::abs(pa[i] - pb[i]));
  return m;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lpflow_test_" + name);
}

}  // namespace

TEST_CASE("grid validation and lattice layout") {
  CHECK_THROWS_AS(Grid(1, 16), ArgumentError);
  CHECK_THROWS_AS(Grid(2, 12), ArgumentError);
  CHECK_THROWS_AS(Grid(2, 4), ArgumentError);
  const Grid g(2, 8);
  CHECK(g.size() == 64);
  CHECK(g.wavenumber(4) == 4);
  CHECK(g.wavenumber(5) == -3);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.flat_index(g.multi_index(i)) == i);
    const auto k = g.wavevector(i);
    const auto kc = g.wavevector(g.conjugate_index(i));
    for (int a = 0; a < 2; ++a) {
      if (g.is_nyquist(k[a])) CHECK(kc[a] == k[a]);
      else CHECK(kc[a] == -k[a]);
    }
  }
}

TEST_CASE("dft of a constant is concentrated at k = 0") {
  const Grid g(2, 16);
  const GridField F = dft_forward(GridField::constant(g, 1.0));
  CHECK(std::abs(F[0] - cplx(16.0)) < 1e-12);
  for (std::size_t i = 1; i < F.size(); ++i) CHECK(std::abs(F[i]) <= 1e-13);
}

TEST_CASE("dft of a pure mode has one coefficient") {
  const Grid g(2, 16);
  std::vector<cplx> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::polar(1.0, g.coordinates(i)[0]);
  const GridField F = dft_forward(GridField(g, Rep::physical, v, false));
  const std::size_t target = g.flat_index({1, 0, 0});
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (i == target) CHECK(std::abs(F[i] - cplx(16.0)) < 1e-12);
    else CHECK(std::abs(F[i]) < 1e-12);
  }
}

TEST_CASE("representation errors") {
  const Grid g(2, 8);
  CHECK_THROWS_AS(dft_forward(GridField::zeros(g, Rep::spectral)), RepresentationError);
  CHECK_THROWS_AS(dft_inverse(GridField::zeros(g, Rep::physical)), RepresentationError);
}

TEST_CASE("round trip, Hermitian symmetry and Parseval on random fields") {
  for (int d : {2, 3}) {
    const Grid g(d, d == 2 ? 32 : 16);
    const GridField f = random_scalar(g, {1.0, 1.0, 6.0, 11});
    const GridField F = dft_forward(f);
    const GridField back = dft_inverse(F);
    double fmax = 0.0;
    for (auto x : f.values()) fmax = std::max(fmax, std::abs(x));
    CHECK(max_abs_diff(f, back) <= 1e-12 * fmax);
    double Fmax = 0.0;
    for (auto x : F.values()) Fmax = std::max(Fmax, std::abs(x));
    for (std::size_t i = 0; i < F.size(); ++i) CHECK(std::abs(F[g.conjugate_index(i)] - std::conj(F[i])) <= 1e-12 * Fmax);
    const double e1 = physical_energy(f), e2 = spectral_energy(F);
    CHECK(std::abs(e1 - e2) <= 1e-10 * e1);
  }
}

TEST_CASE("spectral derivatives") {
  const Grid g(2, 32);
  const auto s = GridField::sample(g, [](auto x) { return std::sin(x[0]); });
  const auto c = GridField::sample(g, [](auto x) { return std::cos(x[0]); });
  CHECK(max_abs_diff(derivative(s, 0), c) <= 1e-12);
  CHECK(max_abs_diff(derivative(GridField::constant(g, 3.0), 1), GridField::zeros(g)) <= 1e-13);
  CHECK_THROWS_AS(derivative(s, 2), ArgumentError);

  std::vector<cplx> v(g.size()), dv(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    v[i] = std::polar(1.0, 3.0 * g.coordinates(i)[1]);
    dv[i] = cplx(0.0, 3.0) * v[i];
  }
  const GridField m(g, Rep::physical, v, false), dm(g, Rep::physical, dv, false);
  CHECK(max_abs_diff(derivative(m, 1), dm) <= 1e-12);

  const GridField f = random_scalar(g, {1.0, 1.0, 10.0, 3});
  const GridField h = random_scalar(g, {0.5, 1.0, 10.0, 4});
  const GridField lhs = derivative(2.0 * f - 0.5 * h, 0);
  const GridField rhs = 2.0 * derivative(f, 0) - 0.5 * derivative(h, 0);
  CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * 10.0);
}

TEST_CASE("random band-limited fields") {
  const Grid g(2, 32);
  const GridField f = random_scalar(g, {0.0, 1.0, 1.0, 5});
  const GridField F = dft_forward(f);
  const auto& kv = wavevectors(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (squared_magnitude(kv[i]) != 1.0) CHECK(std::abs(F[i]) <= 1e-12);

  const VectorField u = random_vector(g, {2.0, 1.0, 8.0, 5});
  CHECK(u.div_free);
  CHECK(relative_divergence(u) <= 1e-10);

  const GridField f2 = random_scalar(g, {0.0, 1.0, 1.0, 5});
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(f[i] == f2[i]);
  CHECK_THROWS_AS(random_scalar(g, {0.0, 5.0, 4.0, 1}), ArgumentError);
  CHECK_THROWS_AS(random_scalar(g, {0.0, 1.5, 1.9, 1}), ArgumentError);
}

TEST_CASE("LPF1 round trip and format errors") {
  const Grid g(2, 16);
  const GridField f = random_scalar(g, {1.0, 1.0, 5.0, 9});
  const auto path = temp_file("scalar.lpf");
  write_field(f, path);
  const GridField back = read_scalar_field(path);
  REQUIRE(back.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);

  const VectorField u = random_vector(g, {1.0, 1.0, 5.0, 9});
  const auto vpath = temp_file("vector.lpf");
  write_field(u, vpath);
  const VectorField ub = read_vector_field(vpath);
  CHECK(ub.div_free);
  for (int a = 0; a < 2; ++a)
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(ub[a][i] == u[a][i]);

  {
    std::fstream fs(path, std::ios::in | std::ios::out | std::ios::binary);
    fs.seekp(0);
    fs.write("XPF1", 4);
  }
  CHECK_THROWS_AS(read_field(path), FormatError);

  write_field(f, path);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 8);
  CHECK_THROWS_AS(read_field(path), FormatError);
  CHECK_THROWS_AS(read_field(temp_file("does_not_exist.lpf")), Error);
  std::filesystem::remove(path);
  std::filesystem::remove(vpath);
}

TEST_CASE("vector field arithmetic keeps the grid") {
  const Grid g(2, 8);
  const VectorField z = VectorField::zeros(g);
  const VectorField s = z + 2.0 * z - z;
  CHECK(s.dim() == 2);
  CHECK(s.grid() == g);
  CHECK_THROWS_AS(VectorField({GridField::zeros(g), GridField::zeros(Grid(2, 16))}, false), ArgumentError);
}
