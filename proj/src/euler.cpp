#include "lpflow/euler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include <json.hpp>

#include "lpflow/errors.hpp"
#include "lpflow/field_io.hpp"
#include "lpflow/spectral.hpp"

namespace lpflow {

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("solver dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ArgumentError("solver T must be nonnegative");
  if (!(cfl_guard > 0.0) || cfl_guard > 0.5) throw ArgumentError("cfl_guard must lie in (0, 0.5]");
  if (record_every < 1) throw ArgumentError("record_every must be >= 1");
}

int SolverConfig::steps() const {
  if (T == 0.0) return 0;
  return static_cast<int>(std::ceil(T / dt - 1e-9));
}

double courant_number(double sup, double dt, const Grid& grid) { return sup * dt / grid.spacing(); }

SpectralState to_state(const VectorField& u) {
  SpectralState s;
  for (const auto& c : u.components) {
    const GridField spec = to_spectral(c);
    s.emplace_back(spec.values().begin(), spec.values().end());
  }
  return s;
}

VectorField from_state(const Grid& grid, const SpectralState& s, bool div_free) {
  std::vector<GridField> comps;
  for (const auto& c : s) comps.emplace_back(grid, Rep::spectral, c, true);
  return VectorField(std::move(comps), div_free);
}

namespace {

void project_inplace(const Grid& grid, SpectralState& s) {
  const auto& kv = wavevectors(grid);
  const int d = grid.dim();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k2 = squared_magnitude(kv[i]);
    if (k2 == 0.0) continue;
    cplx dot = 0.0;
    for (int a = 0; a < d; ++a) dot += static_cast<double>(kv[i][a]) * s[a][i];
    dot /= k2;
    for (int a = 0; a < d; ++a) s[a][i] -= static_cast<double>(kv[i][a]) * dot;
  }
}

void require_div_free(const VectorField& u, const char* who) {
  if (!is_div_free(u)) throw ArgumentError(std::string(who) + " needs a divergence-free field");
}

}  // namespace

TransportOperator::TransportOperator(const Grid& grid, bool dealias)
    : grid_(grid), dealias_(dealias), mask_(grid.size(), 1.0), work_(grid.size()), acc_re_(grid.size()) {
  if (dealias_) {
    const auto& kv = wavevectors(grid);
    const int cut = grid.dealias_cutoff();
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (int a = 0; a < grid.dim(); ++a)
        if (std::abs(kv[i][a]) > cut) mask_[i] = 0.0;
  }
  phys_a_.assign(static_cast<std::size_t>(grid.dim()), std::vector<cplx>(grid.size()));
}

void TransportOperator::project(SpectralState& s) const { project_inplace(grid_, s); }

double TransportOperator::sup_norm(const SpectralState& s) {
  const std::size_t n = grid_.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::fill(acc_re_.begin(), acc_re_.end(), 0.0);
  for (const auto& c : s) {
    std::copy(c.begin(), c.end(), work_.begin());
    fft_inplace(grid_, work_, +1);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = work_[i].real() * scale;
      acc_re_[i] += v * v;
    }
  }
  double m = 0.0;
  for (double x : acc_re_) m = std::max(m, x);
  return std::sqrt(m);
}

void TransportOperator::advect(const SpectralState& a, const SpectralState& b, SpectralState& out) {
  const int d = grid_.dim();
  const std::size_t n = grid_.size();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const auto& kv = wavevectors(grid_);
  for (int i = 0; i < d; ++i) {
    auto& pa = phys_a_[static_cast<std::size_t>(i)];
    for (std::size_t idx = 0; idx < n; ++idx) pa[idx] = a[i][idx] * mask_[idx];
    fft_inplace(grid_, pa, +1);
    for (auto& x : pa) x = cplx(x.real() * scale, 0.0);
  }
  out.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    std::fill(acc_re_.begin(), acc_re_.end(), 0.0);
    for (int i = 0; i < d; ++i) {
      for (std::size_t idx = 0; idx < n; ++idx) {
        const int k = kv[idx][i];
        work_[idx] = grid_.is_nyquist(k) ? cplx(0.0) : b[j][idx] * cplx(0.0, k * mask_[idx]);
      }
      fft_inplace(grid_, work_, +1);
      const auto& pa = phys_a_[static_cast<std::size_t>(i)];
      for (std::size_t idx = 0; idx < n; ++idx) acc_re_[idx] += pa[idx].real() * (work_[idx].real() * scale);
    }
    for (std::size_t idx = 0; idx < n; ++idx) work_[idx] = acc_re_[idx];
    fft_inplace(grid_, work_, -1);
    auto& o = out[static_cast<std::size_t>(j)];
    o.resize(n);
    for (std::size_t idx = 0; idx < n; ++idx) o[idx] = work_[idx] * (scale * mask_[idx]);
  }
}

void TransportOperator::apply(const SpectralState& a, const SpectralState& b, SpectralState& out) {
  advect(a, b, out);
  project_inplace(grid_, out);
  for (auto& c : out)
    for (auto& x : c) x = -x;
}

VectorField leray_project(const VectorField& u) {
  SpectralState s = to_state(u);
  project_inplace(u.grid(), s);
  VectorField out = from_state(u.grid(), s, true);
  bool real = true;
  for (const auto& c : u.components) real = real && c.is_real();
  if (!real) {
    std::vector<GridField> comps;
    for (std::size_t a = 0; a < s.size(); ++a) comps.emplace_back(u.grid(), Rep::spectral, s[a], false);
    out = VectorField(std::move(comps), true);
  }
  return u.components.front().rep() == Rep::spectral ? out : to_physical(out);
}

VectorField advection(const VectorField& a, const VectorField& b, bool dealias) {
  if (!(a.grid() == b.grid()) || a.dim() != b.dim()) throw ArgumentError("advection operands differ in shape");
  TransportOperator op(a.grid(), dealias);
  SpectralState out;
  op.advect(to_state(a), to_state(b), out);
  return from_state(a.grid(), out, false);
}

VectorField pressure_gradient(const VectorField& u, bool dealias) {
  require_div_free(u, "pressure_gradient");
  TransportOperator op(u.grid(), dealias);
  const SpectralState su = to_state(u);
  SpectralState nl;
  op.advect(su, su, nl);
  const auto& kv = wavevectors(u.grid());
  const int d = u.dim();
  SpectralState out(static_cast<std::size_t>(d), std::vector<cplx>(u.grid().size()));
  for (std::size_t i = 0; i < u.grid().size(); ++i) {
    const double k2 = squared_magnitude(kv[i]);
    if (k2 == 0.0) continue;
    cplx dot = 0.0;
    for (int a = 0; a < d; ++a) dot += static_cast<double>(kv[i][a]) * nl[a][i];
    for (int a = 0; a < d; ++a) out[a][i] = -static_cast<double>(kv[i][a]) * dot / k2;
  }
  return from_state(u.grid(), out, false);
}

VectorField euler_rhs(const VectorField& u, bool dealias) {
  require_div_free(u, "euler_rhs");
  TransportOperator op(u.grid(), dealias);
  const SpectralState su = to_state(u);
  SpectralState out;
  op.apply(su, su, out);
  return from_state(u.grid(), out, true);
}

VectorField taylor_green(const Grid& grid) {
  std::vector<GridField> c;
  if (grid.dim() == 2) {
    c.push_back(GridField::sample(grid, [](auto x) { return std::sin(x[0]) * std::cos(x[1]); }));
    c.push_back(GridField::sample(grid, [](auto x) { return -std::cos(x[0]) * std::sin(x[1]); }));
  } else {
    c.push_back(GridField::sample(grid, [](auto x) { return std::sin(x[0]) * std::cos(x[1]) * std::cos(x[2]); }));
    c.push_back(GridField::sample(grid, [](auto x) { return -std::cos(x[0]) * std::sin(x[1]) * std::cos(x[2]); }));
    c.push_back(GridField::zeros(grid));
  }
  return to_spectral(VectorField(std::move(c), true));
}

std::vector<GridField> vorticity(const VectorField& u) {
  const int d = u.dim();
  auto curl = [&](int a, int b) { return derivative(to_spectral(u[b]), a) - derivative(to_spectral(u[a]), b); };
  if (d == 2) return {curl(0, 1)};
  return {curl(1, 2), curl(2, 0), curl(0, 1)};
}

Diagnostics diagnose(const VectorField& u, double time, const LPFilterBank* bank, std::span<const NormSpec> specs) {
  Diagnostics diag;
  diag.time = time;
  for (const auto& c : u.components) diag.energy += 0.5 * spectral_energy(to_spectral(c));
  for (const auto& w : vorticity(u)) diag.enstrophy += 0.5 * spectral_energy(w);
  for (const auto& spec : specs) diag.norms.push_back(norm(*bank, u, spec));
  return diag;
}

namespace {

// Classical RK4 on -P(u . grad u) with re-projection after each step. The
// callback sees every state after a completed step.
template <class OnStep>
SpectralState integrate(const Grid& grid, SpectralState u, const SolverConfig& cfg, OnStep&& on_step) {
  cfg.validate();
  const int steps = cfg.steps();
  if (steps == 0) return u;
  const double h = cfg.step();
  TransportOperator op(grid, cfg.dealias);
  const std::size_t d = u.size();
  const std::size_t n = grid.size();
  SpectralState k1, k2, k3, k4, stage(d, std::vector<cplx>(n));
  auto combine = [&](const SpectralState& k, double c) {
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t i = 0; i < n; ++i) stage[a][i] = u[a][i] + c * k[a][i];
  };
  for (int step = 0; step < steps; ++step) {
    const double t = step * h;
    const double cfl = courant_number(op.sup_norm(u), h, grid);
    if (!(cfl <= cfg.cfl_guard)) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "CFL guard violated at t=%.6g (Courant number %.4g > %.4g)", t, cfl,
                    cfg.cfl_guard);
      throw StabilityError(buf, t);
    }
    op.apply(u, u, k1);
    combine(k1, 0.5 * h);
    op.apply(stage, stage, k2);
    combine(k2, 0.5 * h);
    op.apply(stage, stage, k3);
    combine(k3, h);
    op.apply(stage, stage, k4);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t i = 0; i < n; ++i)
        u[a][i] += (h / 6.0) * (k1[a][i] + 2.0 * k2[a][i] + 2.0 * k3[a][i] + k4[a][i]);
    op.project(u);
    on_step(step + 1, (step + 1) * h, u);
  }
  return u;
}

}  // namespace

VectorField solve_state(const VectorField& u0, const SolverConfig& cfg) {
  require_div_free(u0, "solve");
  SpectralState u = integrate(u0.grid(), to_state(u0), cfg, [](int, double, const SpectralState&) {});
  return from_state(u0.grid(), u, true);
}

Trajectory solve(const VectorField& u0, const SolverConfig& cfg, std::span<const NormSpec> record) {
  require_div_free(u0, "solve");
  cfg.validate();
  const Grid& grid = u0.grid();
  std::unique_ptr<LPFilterBank> bank;
  if (!record.empty()) bank = std::make_unique<LPFilterBank>(grid);
  Trajectory traj;
  traj.norm_specs.assign(record.begin(), record.end());
  auto push = [&](double t, const SpectralState& s) {
    VectorField v = from_state(grid, s, true);
    traj.diagnostics.push_back(diagnose(v, t, bank.get(), record));
    traj.times.push_back(t);
    traj.states.push_back(std::move(v));
  };
  const SpectralState start = to_state(u0);
  push(0.0, start);
  const int steps = cfg.steps();
  integrate(grid, start, cfg, [&](int step, double t, const SpectralState& s) {
    if (step % cfg.record_every == 0 || step == steps) push(t, s);
  });
  return traj;
}

// ---- particle tracking ----

namespace {

struct ModeTable {
  std::vector<std::array<int, 3>> k;
  std::vector<std::array<cplx, 3>> coef;  // series coefficients per component
};

ModeTable mode_table(const VectorField& u, double prune_tol) {
  const Grid& g = u.grid();
  const auto& kv = wavevectors(g);
  const int d = u.dim();
  std::vector<GridField> spec;
  for (const auto& c : u.components) spec.push_back(to_spectral(c));
  double amax = 0.0;
  for (const auto& s : spec)
    for (const auto& x : s.values()) amax = std::max(amax, std::abs(x));
  const double cut = prune_tol * amax;
  const double norm = 1.0 / std::sqrt(static_cast<double>(g.size()));
  ModeTable t;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double m = 0.0;
    for (const auto& s : spec) m = std::max(m, std::abs(s[i]));
    if (m == 0.0 || m <= cut) continue;
    std::array<cplx, 3> c{};
    for (int a = 0; a < d; ++a) c[a] = spec[a][i] * norm;
    t.k.push_back(kv[i]);
    t.coef.push_back(c);
  }
  return t;
}

// Evaluates sum_k c_k e^{i k.x} with per-axis exponential tables.
std::array<double, 3> evaluate(const ModeTable& t, int d, int n, const std::array<double, 3>& x) {
  const int half = n / 2;
  std::vector<cplx> e[3];
  for (int a = 0; a < d; ++a) {
    e[a].resize(static_cast<std::size_t>(n));
    const cplx base = std::polar(1.0, x[a]);
    // e[a][k + half - 1] = exp(i k x) for k in [-half+1, half]
    cplx p = std::polar(1.0, -(half - 1) * x[a]);
    for (int k = -half + 1; k <= half; ++k) {
      e[a][static_cast<std::size_t>(k + half - 1)] = p;
      p *= base;
    }
  }
  std::array<cplx, 3> acc{};
  for (std::size_t m = 0; m < t.k.size(); ++m) {
    cplx phase = e[0][static_cast<std::size_t>(t.k[m][0] + half - 1)];
    for (int a = 1; a < d; ++a) phase *= e[a][static_cast<std::size_t>(t.k[m][a] + half - 1)];
    for (int a = 0; a < d; ++a) acc[a] += t.coef[m][a] * phase;
  }
  return {acc[0].real(), acc[1].real(), acc[2].real()};
}

}  // namespace

std::array<double, 3> interpolate(const VectorField& u, const std::array<double, 3>& x) {
  return evaluate(mode_table(u, 0.0), u.dim(), u.grid().n(), x);
}

VectorField FlowMap::displacement(std::size_t time_index) const {
  const auto& pos = positions.at(time_index);
  const int d = seed_grid.dim();
  std::vector<GridField> comps;
  for (int a = 0; a < d; ++a) {
    std::vector<double> v(seed_grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = pos[i][a] - seed_grid.coordinates(i)[a];
    comps.push_back(GridField::from_real(seed_grid, v));
  }
  return VectorField(std::move(comps), false);
}

FlowMap flow_map(const Trajectory& traj, std::span<const double> times, const FlowMapOptions& opts) {
  if (traj.size() == 0) throw ArgumentError("flow_map needs a non-empty trajectory");
  const Grid& grid = traj.grid();
  const int d = grid.dim();
  const int m = opts.seeds_per_axis == 0 ? grid.n() : opts.seeds_per_axis;
  FlowMap out{Grid(d, m), {}, {}};
  const double t0 = traj.times.front();
  const double t_end = traj.times.back();
  for (double t : times)
    if (t < t0 - 1e-12 || t > t_end + 1e-12) throw ArgumentError("flow_map time outside the trajectory range");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ArgumentError("flow_map times must increase");

  double tau = 0.0;
  if (traj.size() > 1) {
    tau = traj.times[1] - traj.times[0];
    for (std::size_t i = 2; i < traj.size(); ++i)
      if (std::abs(traj.times[i] - traj.times[i - 1] - tau) > 1e-9 * std::max(1.0, tau))
        throw ArgumentError("flow_map needs uniformly spaced snapshots");
  }
  std::vector<std::size_t> targets;
  for (double t : times) {
    if (tau == 0.0) {
      targets.push_back(0);
      continue;
    }
    const double r = (t - t0) / tau;
    const auto idx = static_cast<std::size_t>(std::llround(r));
    if (std::abs(r - static_cast<double>(idx)) > 1e-6 || idx % 2 != 0)
      throw ArgumentError("flow_map times must fall on even snapshot indices");
    targets.push_back(idx);
  }

  std::vector<ModeTable> tables;
  tables.reserve(traj.size());
  for (const auto& s : traj.states) tables.push_back(mode_table(s, opts.prune_tol));

  std::vector<std::array<double, 3>> x(out.seed_grid.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = out.seed_grid.coordinates(i);
  const double H = 2.0 * tau;
  const int n = grid.n();
  std::size_t current = 0;
  for (std::size_t target : targets) {
    for (; current < target; current += 2) {
      for (auto& p : x) {
        auto v1 = evaluate(tables[current], d, n, p);
        std::array<double, 3> q{};
        for (int a = 0; a < d; ++a) q[a] = p[a] + 0.5 * H * v1[a];
        auto v2 = evaluate(tables[current + 1], d, n, q);
        for (int a = 0; a < d; ++a) q[a] = p[a] + 0.5 * H * v2[a];
        auto v3 = evaluate(tables[current + 1], d, n, q);
        for (int a = 0; a < d; ++a) q[a] = p[a] + H * v3[a];
        auto v4 = evaluate(tables[current + 2], d, n, q);
        for (int a = 0; a < d; ++a) p[a] += (H / 6.0) * (v1[a] + 2.0 * v2[a] + 2.0 * v3[a] + v4[a]);
      }
    }
    out.times.push_back(t0 + static_cast<double>(target) * tau);
    out.positions.push_back(x);
  }
  return out;
}

GridField jacobian_determinant(const VectorField& displacement) {
  const Grid& g = displacement.grid();
  const int d = g.dim();
  // grad[a][b] = delta_ab + d_b D_a
  std::vector<std::vector<double>> m(static_cast<std::size_t>(d * d));
  for (int a = 0; a < d; ++a) {
    const GridField spec = to_spectral(displacement[a]);
    for (int b = 0; b < d; ++b) {
      const GridField der = to_physical(derivative(spec, b));
      auto& slot = m[static_cast<std::size_t>(a * d + b)];
      slot.resize(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) slot[i] = der[i].real() + (a == b ? 1.0 : 0.0);
    }
  }
  std::vector<double> det(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto at = [&](int a, int b) { return m[static_cast<std::size_t>(a * d + b)][i]; };
    if (d == 2) {
      det[i] = at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    } else {
      det[i] = at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
               at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
               at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
    }
  }
  return GridField::from_real(g, det);
}

void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "fields");
  nlohmann::json manifest;
  manifest["times"] = traj.times;
  manifest["files"] = nlohmann::json::array();
  manifest["diagnostics"] = nlohmann::json::array();
  std::vector<std::string> specs;
  for (const auto& s : traj.norm_specs) specs.push_back(s.describe());
  manifest["norm_specs"] = specs;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "fields/state_%04zu.lpf", i);
    write_field(traj.states[i], dir / name);
    manifest["files"].push_back(name);
    const auto& dg = traj.diagnostics[i];
    manifest["diagnostics"].push_back(
        {{"time", dg.time}, {"energy", dg.energy}, {"enstrophy", dg.enstrophy}, {"norms", dg.norms}});
  }
  std::ofstream os(dir / "manifest.json");
  if (!os) throw Error("cannot write trajectory manifest in " + dir.string());
  os << manifest.dump(2) << '\n';
}

}  // namespace lpflow
