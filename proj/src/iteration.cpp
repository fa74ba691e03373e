#include "lpflow/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>

#include "lpflow/errors.hpp"
#include "lpflow/field_io.hpp"
#include "lpflow/spectral.hpp"

namespace lpflow {

double IterationLadder::delta_at(int m) const {
  if (m < 1 || m > static_cast<int>(delta.size())) throw ArgumentError("ladder member index out of range");
  return delta[static_cast<std::size_t>(m - 1)];
}

std::vector<double> IterationLadder::sup_norms() const {
  std::vector<double> out;
  for (const auto& tr : members) {
    double m = 0.0;
    for (const auto& dg : tr.diagnostics)
      if (!dg.norms.empty()) m = std::max(m, dg.norms.front());
    out.push_back(m);
  }
  return out;
}

namespace {

SpectralState zeros_like(const SpectralState& s) {
  return SpectralState(s.size(), std::vector<cplx>(s.front().size()));
}

SpectralState difference(const SpectralState& a, const SpectralState& b) {
  SpectralState out = a;
  for (std::size_t c = 0; c < out.size(); ++c)
    for (std::size_t i = 0; i < out[c].size(); ++i) out[c][i] -= b[c][i];
  return out;
}

}  // namespace

IterationLadder iterate(const LPFilterBank& bank, const VectorField& u0, int M, const SolverConfig& cfg,
                        const NormSpec& norm_spec) {
  if (M < 1) throw ArgumentError("iteration ladder needs M >= 1");
  if (!is_div_free(u0)) throw ArgumentError("iterate needs divergence-free initial data");
  if (!(bank.grid() == u0.grid())) throw ArgumentError("initial data grid does not match the filter bank grid");
  cfg.validate();
  norm_spec.validate();
  const NormSpec lower = norm_spec.with_s(norm_spec.s - 1.0);
  lower.validate();

  const Grid& grid = u0.grid();
  const auto Ms = static_cast<std::size_t>(M);
  const VectorField U0 = to_spectral(u0);
  std::vector<SpectralState> u(Ms + 1);
  for (std::size_t m = 1; m <= Ms; ++m) u[m] = to_state(p_le(bank, U0, static_cast<int>(m)));
  u[0] = zeros_like(u[1]);

  IterationLadder ladder;
  ladder.norm_spec = norm_spec;
  ladder.members.resize(Ms + 1);
  ladder.delta.assign(Ms, 0.0);
  const NormSpec record[] = {norm_spec};
  for (auto& tr : ladder.members) tr.norm_specs = {norm_spec};

  auto measure = [&] {
    for (std::size_t m = 1; m <= Ms; ++m) {
      const double dm = norm(bank, from_state(grid, difference(u[m], u[m - 1])), lower);
      ladder.delta[m - 1] = std::max(ladder.delta[m - 1], dm);
    }
  };
  auto snapshot = [&](double t) {
    for (std::size_t m = 0; m <= Ms; ++m) {
      VectorField v = from_state(grid, u[m]);
      auto& tr = ladder.members[m];
      tr.diagnostics.push_back(diagnose(v, t, &bank, record));
      tr.times.push_back(t);
      tr.states.push_back(std::move(v));
    }
  };
  measure();
  snapshot(0.0);

  const int steps = cfg.steps();
  const double h = steps > 0 ? cfg.step() : 0.0;
  TransportOperator op(grid, cfg.dealias);
  std::vector<SpectralState> stage = u, k1(Ms + 1), k2(Ms + 1), k3(Ms + 1), k4(Ms + 1);
  for (auto* k : {&k1, &k2, &k3, &k4})
    for (auto& s : *k) s = zeros_like(u[1]);

  auto rhs = [&](const std::vector<SpectralState>& x, std::vector<SpectralState>& k) {
    // member 1 is advected by u^(0) = 0, so its slope stays zero
    for (std::size_t m = 2; m <= Ms; ++m) op.apply(x[m - 1], x[m], k[m]);
  };
  auto combine = [&](const std::vector<SpectralState>& k, double c) {
    for (std::size_t m = 1; m <= Ms; ++m)
      for (std::size_t a = 0; a < u[m].size(); ++a)
        for (std::size_t i = 0; i < u[m][a].size(); ++i) stage[m][a][i] = u[m][a][i] + c * k[m][a][i];
  };

  for (int step = 0; step < steps; ++step) {
    const double t = step * h;
    for (std::size_t m = 1; m <= Ms; ++m) {
      const double cfl = courant_number(op.sup_norm(u[m]), h, grid);
      if (!(cfl <= cfg.cfl_guard)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "CFL guard violated by ladder member %zu at t=%.6g (Courant number %.4g > %.4g)",
                      m, t, cfl, cfg.cfl_guard);
        throw StabilityError(buf, t, static_cast<int>(m));
      }
    }
    rhs(u, k1);
    combine(k1, 0.5 * h);
    rhs(stage, k2);
    combine(k2, 0.5 * h);
    rhs(stage, k3);
    combine(k3, h);
    rhs(stage, k4);
    for (std::size_t m = 2; m <= Ms; ++m) {
      for (std::size_t a = 0; a < u[m].size(); ++a)
        for (std::size_t i = 0; i < u[m][a].size(); ++i)
          u[m][a][i] += (h / 6.0) * (k1[m][a][i] + 2.0 * k2[m][a][i] + 2.0 * k3[m][a][i] + k4[m][a][i]);
      op.project(u[m]);
    }
    measure();
    if ((step + 1) % cfg.record_every == 0 || step + 1 == steps) snapshot((step + 1) * h);
  }
  return ladder;
}

ExperimentReport cauchy_report(const IterationLadder& ladder) {
  const int M = ladder.M();
  if (M < 4) throw ArgumentError("cauchy_report needs a ladder with M >= 4");
  if (std::all_of(ladder.delta.begin(), ladder.delta.end(), [](double x) { return x == 0.0; }))
    throw DegenerateInputError("every ladder increment is zero");
  const Grid& grid = ladder.members.front().grid();
  ExperimentReport rep;
  rep.estimate_id = "iteration_cauchy";
  rep.s = ladder.norm_spec.s;
  rep.p = ladder.norm_spec.p;
  rep.q = ladder.norm_spec.q;
  rep.d = grid.dim();
  rep.n = grid.n();
  Table t{{"m", "delta", "ratio", "sup_norm"}, {}};
  const auto sups = ladder.sup_norms();
  std::vector<double> ms, ds;
  for (int m = 1; m <= M; ++m) {
    const double dm = ladder.delta_at(m);
    double ratio = std::nan("");
    if (m > 1) {
      const double prev = ladder.delta_at(m - 1);
      ratio = dm == 0.0 ? 0.0 : (prev == 0.0 ? std::numeric_limits<double>::infinity() : dm / prev);
      rep.ratios.push_back(ratio);
    }
    t.add_row({static_cast<double>(m), dm, ratio, sups[static_cast<std::size_t>(m)]});
    ms.push_back(m);
    ds.push_back(dm);
  }
  rep.tables["delta"] = t;
  Plot plot{"ladder increments", "m", "delta_m", true, ms, {{"delta", ds}}};
  rep.plots["delta"] = plot;
  nlohmann::json delta = nlohmann::json::array();
  for (double x : ds) delta.push_back(json_number(x));
  rep.extra["M"] = M;
  rep.extra["delta"] = delta;
  rep.extra["norm_spec"] = ladder.norm_spec.describe();
  rep.extra["T"] = ladder.members.front().times.back();
  rep.notes.push_back("delta_m = sup_t ||u^(m) - u^(m-1)|| in F^{s-1}, sup over every time step");
  rep.notes.push_back("ratios[i] = delta_{i+2} / delta_{i+1}");
  return rep;
}

double ladder_distance(const LPFilterBank& bank, const IterationLadder& ladder, const VectorField& reference) {
  const VectorField diff = to_spectral(ladder.limit()) - to_spectral(reference);
  return norm(bank, diff, ladder.norm_spec.with_s(ladder.norm_spec.s - 1.0));
}

void write_ladder(const IterationLadder& ladder, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "members");
  nlohmann::json manifest;
  manifest["M"] = ladder.M();
  manifest["norm_spec"] = ladder.norm_spec.describe();
  manifest["delta"] = nlohmann::json::array();
  for (double x : ladder.delta) manifest["delta"].push_back(json_number(x));
  manifest["ratios"] = nlohmann::json::array();
  for (std::size_t i = 1; i < ladder.delta.size(); ++i) {
    const double prev = ladder.delta[i - 1];
    manifest["ratios"].push_back(json_number(ladder.delta[i] == 0.0 ? 0.0 : ladder.delta[i] / prev));
  }
  manifest["member_files"] = nlohmann::json::array();
  for (int m = 0; m <= ladder.M(); ++m) {
    char name[64];
    std::snprintf(name, sizeof name, "members/member_%02d.lpf", m);
    write_field(ladder.members[static_cast<std::size_t>(m)].states.back(), dir / name);
    manifest["member_files"].push_back(name);
  }
  std::ofstream os(dir / "manifest.json");
  if (!os) throw Error("cannot write ladder manifest in " + dir.string());
  os << manifest.dump(2) << '\n';
}

}  // namespace lpflow
