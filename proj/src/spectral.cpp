#include "lpflow/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "lpflow/errors.hpp"

namespace lpflow {

namespace {

// FFTW's planner is not thread safe; plans are created once per shape under a
// lock and then executed through the new-array interface. FFTW_ESTIMATE keeps
// the chosen algorithm, and therefore the rounding, identical across runs.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int d, int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(d, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t size = 1;
    int dims[3];
    for (int a = 0; a < d; ++a) {
      dims[a] = n;
      size *= static_cast<std::size_t>(n);
    }
    auto* scratch = fftw_alloc_complex(size);
    fftw_plan plan = fftw_plan_dft(d, dims, scratch, scratch, sign == -1 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

std::vector<cplx> copy_values(const GridField& f) { return {f.values().begin(), f.values().end()}; }

}  // namespace

void fft_inplace(const Grid& grid, std::span<cplx> data, int sign) {
  fftw_plan plan = PlanCache::instance().get(grid.dim(), grid.n(), sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

GridField dft_forward(const GridField& f) {
  if (f.rep() != Rep::physical) throw RepresentationError("dft_forward expects a physical field");
  auto v = copy_values(f);
  fft_inplace(f.grid(), v, -1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(f.grid().size()));
  for (auto& x : v) x *= scale;
  return GridField(f.grid(), Rep::spectral, std::move(v), f.is_real());
}

GridField dft_inverse(const GridField& F) {
  if (F.rep() != Rep::spectral) throw RepresentationError("dft_inverse expects a spectral field");
  auto v = copy_values(F);
  fft_inplace(F.grid(), v, +1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(F.grid().size()));
  if (F.is_real()) {
    for (auto& x : v) x = cplx(x.real() * scale, 0.0);
  } else {
    for (auto& x : v) x *= scale;
  }
  return GridField(F.grid(), Rep::physical, std::move(v), F.is_real());
}

GridField to_spectral(const GridField& f) { return f.rep() == Rep::spectral ? f : dft_forward(f); }
GridField to_physical(const GridField& f) { return f.rep() == Rep::physical ? f : dft_inverse(f); }

VectorField to_spectral(const VectorField& u) {
  std::vector<GridField> c;
  for (const auto& comp : u.components) c.push_back(to_spectral(comp));
  return VectorField(std::move(c), u.div_free);
}

VectorField to_physical(const VectorField& u) {
  std::vector<GridField> c;
  for (const auto& comp : u.components) c.push_back(to_physical(comp));
  return VectorField(std::move(c), u.div_free);
}

GridField apply_multiplier(const GridField& f, std::span<const double> multiplier) {
  if (multiplier.size() != f.grid().size()) throw ArgumentError("multiplier size does not match grid");
  auto v = std::move(to_spectral(f)).release();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= multiplier[i];
  GridField out(f.grid(), Rep::spectral, std::move(v), f.is_real());
  return f.rep() == Rep::spectral ? out : dft_inverse(out);
}

GridField derivative(const GridField& f, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim())
    throw ArgumentError("derivative axis " + std::to_string(axis) + " out of range for d=" + std::to_string(g.dim()));
  auto v = std::move(to_spectral(f)).release();
  const auto& kv = wavevectors(g);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int k = kv[i][static_cast<std::size_t>(axis)];
    v[i] = g.is_nyquist(k) ? cplx(0.0) : v[i] * cplx(0.0, k);
  }
  GridField out(g, Rep::spectral, std::move(v), f.is_real());
  return f.rep() == Rep::spectral ? out : dft_inverse(out);
}

namespace {

bool above_cutoff(const Grid& g, const std::array<int, 3>& k) {
  const int kc = g.dealias_cutoff();
  for (int a = 0; a < g.dim(); ++a)
    if (std::abs(k[static_cast<std::size_t>(a)]) > kc) return true;
  return false;
}

void truncate_inplace(const Grid& g, std::vector<cplx>& spec) {
  const auto& kv = wavevectors(g);
  for (std::size_t i = 0; i < spec.size(); ++i)
    if (above_cutoff(g, kv[i])) spec[i] = 0.0;
}

}  // namespace

GridField dealias(const GridField& f) {
  auto v = std::move(to_spectral(f)).release();
  truncate_inplace(f.grid(), v);
  GridField out(f.grid(), Rep::spectral, std::move(v), f.is_real());
  return f.rep() == Rep::spectral ? out : dft_inverse(out);
}

GridField dealiased_product(const GridField& a, const GridField& b) {
  if (!(a.grid() == b.grid())) throw ArgumentError("product of fields on different grids");
  const GridField pa = to_physical(dealias(a));
  const GridField pb = to_physical(dealias(b));
  std::vector<cplx> prod(pa.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = pa[i] * pb[i];
  const bool real = a.is_real() && b.is_real();
  if (real)
    for (auto& x : prod) x = cplx(x.real(), 0.0);
  return to_physical(dealias(GridField(a.grid(), Rep::physical, std::move(prod), real)));
}

double relative_divergence(const VectorField& u) {
  const Grid& g = u.grid();
  std::vector<GridField> spec;
  for (const auto& c : u.components) spec.push_back(to_spectral(c));
  double max_div = 0.0;
  double max_amp = 0.0;
  const auto& kv = wavevectors(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& k = kv[i];
    cplx div = 0.0;
    for (int a = 0; a < u.dim(); ++a) {
      const cplx c = spec[static_cast<std::size_t>(a)][i];
      div += double(k[static_cast<std::size_t>(a)]) * c;
      max_amp = std::max(max_amp, std::abs(c));
    }
    max_div = std::max(max_div, std::abs(div));
  }
  return max_amp == 0.0 ? 0.0 : max_div / max_amp;
}

bool is_div_free(const VectorField& u, double tol) { return relative_divergence(u) <= tol; }

double spectral_energy(const GridField& F) {
  const GridField s = to_spectral(F);
  double sum = 0.0;
  for (const auto& x : s.values()) sum += std::norm(x);
  return sum * s.grid().cell_volume();
}

double physical_energy(const GridField& f) {
  const GridField p = to_physical(f);
  double sum = 0.0;
  for (const auto& x : p.values()) sum += std::norm(x);
  return sum * p.grid().cell_volume();
}

}  // namespace lpflow
