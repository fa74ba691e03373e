#include "lpflow/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lpflow/errors.hpp"
#include "lpflow/norms.hpp"
#include "lpflow/spectral.hpp"

namespace lpflow {

MaximalConfig MaximalConfig::dyadic(const Grid& grid, Window window) {
  MaximalConfig cfg;
  cfg.window = window;
  const double h = grid.spacing();
  for (double r = std::numbers::pi; r >= h * (1.0 - 1e-12); r *= 0.5) cfg.radii.push_back(r);
  std::reverse(cfg.radii.begin(), cfg.radii.end());
  return cfg;
}

void MaximalConfig::validate(const Grid& grid) const {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw ArgumentError("maximal radii must be strictly ascending");
  if (!radii.empty() && radii.front() < grid.spacing() * (1.0 - 1e-12))
    throw ArgumentError("smallest maximal radius is below the grid spacing");
}

namespace {

// Periodic moving sum of half-width w along one axis, in place.
void axis_box_sum(const Grid& grid, std::vector<double>& v, int axis, int w) {
  const int n = grid.n();
  const int d = grid.dim();
  std::size_t stride = 1;
  for (int a = d - 1; a > axis; --a) stride *= static_cast<std::size_t>(n);
  const std::size_t block = stride * static_cast<std::size_t>(n);
  std::vector<double> line(static_cast<std::size_t>(n)), prefix(static_cast<std::size_t>(3 * n + 1));
  const bool full = 2 * w + 1 >= n;
  for (std::size_t base = 0; base < v.size(); base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      for (int i = 0; i < n; ++i) line[static_cast<std::size_t>(i)] = v[base + off + static_cast<std::size_t>(i) * stride];
      if (full) {
        double total = 0.0;
        for (double x : line) total += x;
        for (int i = 0; i < n; ++i) v[base + off + static_cast<std::size_t>(i) * stride] = total;
        continue;
      }
      prefix[0] = 0.0;
      for (int i = 0; i < 3 * n; ++i) prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + line[static_cast<std::size_t>(i % n)];
      for (int i = 0; i < n; ++i) {
        const int lo = n + i - w, hi = n + i + w + 1;
        v[base + off + static_cast<std::size_t>(i) * stride] = prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)];
      }
    }
  }
}

std::vector<double> cube_average(const Grid& grid, std::span<const double> values, int w) {
  std::vector<double> out(values.begin(), values.end());
  for (int a = 0; a < grid.dim(); ++a) axis_box_sum(grid, out, a, w);
  const int width = std::min(2 * w + 1, grid.n());
  const double count = std::pow(static_cast<double>(width), grid.dim());
  for (auto& x : out) x /= count;
  return out;
}

// Minimal periodic image of a grid offset, in cells.
int minimal_offset(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }

std::vector<double> ball_average(const Grid& grid, std::span<const double> values, double radius) {
  const int n = grid.n();
  const int d = grid.dim();
  const double h = grid.spacing();
  const int reach = std::min(n / 2, static_cast<int>(std::floor(radius / h + 1e-9)));
  // Offsets -n/2 and n/2 name the same cell; keep only the latter.
  const int lo = 2 * reach >= n ? -reach + 1 : -reach;
  const int lo_c = d == 3 ? lo : 0, hi_c = d == 3 ? reach : 0;
  std::vector<std::array<int, 3>> offsets;
  for (int a = lo; a <= reach; ++a)
    for (int b = lo; b <= reach; ++b)
      for (int c = lo_c; c <= hi_c; ++c)
        if (h * std::sqrt(double(a) * a + double(b) * b + double(c) * c) <= radius * (1.0 + 1e-12))
          offsets.push_back({a, b, c});
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.multi_index(i);
    double sum = 0.0;
    for (const auto& o : offsets) {
      std::array<int, 3> y{};
      for (int a = 0; a < d; ++a) y[a] = ((x[a] + o[a]) % n + n) % n;
      sum += values[grid.flat_index(y)];
    }
    out[i] = sum / static_cast<double>(offsets.size());
  }
  return out;
}

std::vector<double> abs_values(const GridField& f) {
  const GridField p = to_physical(f);
  std::vector<double> v(p.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::abs(p[i]);
  return v;
}

std::vector<double> power(std::span<const double> v, double e) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = e == 0.0 ? 1.0 : std::pow(v[i], e);
  return out;
}

double max_spectral_radius(const GridField& f) {
  const GridField s = to_spectral(f);
  const auto& kv = wavevectors(f.grid());
  double amax = 0.0;
  for (const auto& x : s.values()) amax = std::max(amax, std::abs(x));
  double rmax = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (std::abs(s[i]) > 1e-12 * amax) rmax = std::max(rmax, std::sqrt(squared_magnitude(kv[i])));
  return rmax;
}

}  // namespace

std::vector<double> hl_maximal(const Grid& grid, std::span<const double> values, const MaximalConfig& cfg) {
  cfg.validate(grid);
  if (values.size() != grid.size()) throw ArgumentError("sample count does not match the grid");
  std::vector<double> out(values.begin(), values.end());
  for (auto& x : out) x = std::abs(x);
  const std::vector<double> base = out;
  for (double r : cfg.radii) {
    const auto avg = cfg.window == Window::cube
                         ? cube_average(grid, base, static_cast<int>(std::floor(r / grid.spacing() + 1e-9)))
                         : ball_average(grid, base, r);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], avg[i]);
  }
  return out;
}

GridField hl_maximal(const GridField& f, const MaximalConfig& cfg) {
  const auto m = hl_maximal(f.grid(), abs_values(f), cfg);
  return GridField::from_real(f.grid(), m);
}

double verify_pointwise_bound(const LPFilterBank& bank, const GridField& f, int j, int k, double theta, double r,
                              const MaximalConfig& cfg) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ArgumentError("theta must lie in (0, 1]");
  if (!(r > 0.0 && r <= 1.0)) throw ArgumentError("r must lie in (0, 1]");
  if (!(j > k - 5)) throw ArgumentError("pointwise bound needs j > k - 5");
  if (k < 0 || k > bank.j_max()) throw ArgumentError("block index k out of range");
  const Grid& g = f.grid();
  const auto af = abs_values(f);
  double fmax = 0.0;
  for (double x : af) fmax = std::max(fmax, x);
  if (fmax == 0.0) throw DegenerateInputError("zero field in verify_pointwise_bound");
  if (max_spectral_radius(f) > std::exp2(j + 1) * (1.0 + 1e-12))
    throw ArgumentError("field is not supported in the ball of radius 2^{j+1}");
  const auto lhs = abs_values(delta_j(bank, f, k));
  const auto m1 = hl_maximal(g, power(af, 1.0 - theta), cfg);
  const auto mr = hl_maximal(g, power(af, r), cfg);
  const double factor = std::exp2((j - k) * theta * g.dim() / r);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double rhs = factor * m1[i] * std::pow(mr[i], theta / r);
    if (rhs > 0.0) worst = std::max(worst, lhs[i] / rhs);
  }
  return worst;
}

double peetre_ratio(const GridField& f, int j, double r, const MaximalConfig& cfg) {
  if (!(r > 0.0 && r <= 1.0)) throw ArgumentError("r must lie in (0, 1]");
  const Grid& g = f.grid();
  const int n = g.n();
  const int d = g.dim();
  const auto af = abs_values(f);
  const auto mr = hl_maximal(g, power(af, r), cfg);
  const double scale = std::exp2(j);
  const double h = g.spacing();
  std::vector<double> weight(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto o = g.multi_index(i);
    double y2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double y = minimal_offset(o[a], n) * h;
      y2 += y * y;
    }
    weight[i] = 1.0 / (1.0 + std::pow(scale * std::sqrt(y2), d / r));
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.multi_index(i);
    double sup = 0.0;
    for (std::size_t m = 0; m < g.size(); ++m) {
      const auto o = g.multi_index(m);
      std::array<int, 3> y{};
      for (int a = 0; a < d; ++a) y[a] = (x[a] - o[a] + n) % n;
      sup = std::max(sup, af[g.flat_index(y)] * weight[m]);
    }
    const double rhs = std::pow(mr[i], 1.0 / r);
    if (rhs > 0.0) worst = std::max(worst, sup / rhs);
  }
  if (worst == 0.0) throw DegenerateInputError("zero field in peetre_ratio");
  return worst;
}

double RadialProfile::operator()(double rho, int d) const {
  switch (kind) {
    case Kind::gaussian:
      return std::pow(2.0 * std::numbers::pi, -0.5 * d) * std::exp(-0.5 * rho * rho);
    case Kind::poisson: {
      const double c = std::tgamma(0.5 * (d + 1)) / std::pow(std::numbers::pi, 0.5 * (d + 1));
      return c * std::pow(1.0 + rho * rho, -0.5 * (d + 1));
    }
    case Kind::power_law:
      return std::pow(1.0 + rho, -exponent);
  }
  return 0.0;
}

double RadialProfile::l1_norm(int d) const {
  switch (kind) {
    case Kind::gaussian:
    case Kind::poisson:
      return 1.0;
    case Kind::power_law: {
      if (!(exponent > d)) throw ArgumentError("power-law profile is not integrable for exponent <= d");
      const double sphere = d == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
      return sphere * std::tgamma(d) * std::tgamma(exponent - d) / std::tgamma(exponent);
    }
  }
  return 0.0;
}

double verify_radial_majorant(const RadialProfile& psi, const GridField& f, std::span<const double> eps,
                              const MaximalConfig& cfg) {
  const Grid& g = f.grid();
  const int d = g.dim();
  const int n = g.n();
  const double C = psi.l1_norm(d);
  const auto af = abs_values(f);
  const auto mf = hl_maximal(g, af, cfg);
  if (*std::max_element(mf.begin(), mf.end()) == 0.0) throw DegenerateInputError("zero field in radial majorant check");
  std::vector<cplx> fhat(af.begin(), af.end());
  fft_inplace(g, fhat, -1);
  const double h = g.spacing();
  const double cell = g.cell_volume();
  const double inv_n = 1.0 / static_cast<double>(g.size());
  double worst = 0.0;
  std::vector<cplx> ker(g.size());
  for (double e : eps) {
    if (!(e > 0.0)) throw ArgumentError("eps must be positive");
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto o = g.multi_index(i);
      double y2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double y = minimal_offset(o[a], n) * h;
        y2 += y * y;
      }
      ker[i] = std::pow(e, -d) * psi(std::sqrt(y2) / e, d) * cell;
    }
    fft_inplace(g, ker, -1);
    for (std::size_t i = 0; i < g.size(); ++i) ker[i] *= fhat[i] * inv_n;
    fft_inplace(g, ker, +1);
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(ker[i].real()) / (C * mf[i]));
  }
  return worst;
}

double verify_fefferman_stein(std::span<const GridField> fields, double p, double q, const MaximalConfig& cfg) {
  if (!(p > 1.0) || std::isinf(p)) throw ArgumentError("Fefferman-Stein needs 1 < p < inf");
  if (!(q > 1.0)) throw ArgumentError("Fefferman-Stein needs 1 < q <= inf");
  if (fields.empty()) throw ArgumentError("empty family");
  const Grid& g = fields.front().grid();
  std::vector<double> lhs(g.size(), 0.0), rhs(g.size(), 0.0);
  const bool qinf = std::isinf(q);
  for (const auto& f : fields) {
    if (!(f.grid() == g)) throw ArgumentError("family members live on different grids");
    const auto af = abs_values(f);
    const auto mf = hl_maximal(g, af, cfg);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (qinf) {
        lhs[i] = std::max(lhs[i], mf[i]);
        rhs[i] = std::max(rhs[i], af[i]);
      } else {
        lhs[i] += std::pow(mf[i], q);
        rhs[i] += std::pow(af[i], q);
      }
    }
  }
  double sl = 0.0, sr = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = qinf ? lhs[i] : std::pow(lhs[i], 1.0 / q);
    const double b = qinf ? rhs[i] : std::pow(rhs[i], 1.0 / q);
    sl += std::pow(a, p);
    sr += std::pow(b, p);
  }
  if (sr == 0.0) throw DegenerateInputError("zero family in verify_fefferman_stein");
  return std::pow(sl / sr, 1.0 / p);
}

}  // namespace lpflow
