#include "lpflow/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lpflow/errors.hpp"
#include "lpflow/random_field.hpp"
#include "lpflow/spectral.hpp"

namespace lpflow {

namespace {

constexpr const char* kTimeNote =
    "T is not derived from the data: no formula for the existence time is available, so T comes from the config "
    "and is kept inside the CFL guard";

ExperimentReport base_report(const std::string& id, const LPFilterBank& bank, const DependenceConfig& cfg) {
  ExperimentReport rep;
  rep.estimate_id = id;
  rep.s = cfg.norm_spec.s;
  rep.p = cfg.norm_spec.p;
  rep.q = cfg.norm_spec.q;
  rep.d = bank.grid().dim();
  rep.n = bank.grid().n();
  rep.seeds = {cfg.seed};
  rep.extra["T"] = cfg.solver.T;
  rep.extra["dt"] = cfg.solver.dt;
  rep.extra["norm_spec"] = cfg.norm_spec.describe();
  rep.notes.push_back(kTimeNote);
  rep.notes.push_back("sup over t is taken over the recorded snapshots (every record_every steps and the final step)");
  return rep;
}

void check_data(const LPFilterBank& bank, const VectorField& u, const char* who) {
  if (!(bank.grid() == u.grid())) throw ArgumentError(std::string(who) + ": field grid does not match the bank");
  if (!is_div_free(u)) throw ArgumentError(std::string(who) + " needs divergence-free data");
}

/// sup over snapshots of the norm of a - b; both trajectories share times.
double sup_difference(const LPFilterBank& bank, const Trajectory& a, const Trajectory& b, const NormSpec& spec) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, norm(bank, a.states[i] - b.states[i], spec));
  return m;
}

double sup_norm_of(const LPFilterBank& bank, const Trajectory& a, const NormSpec& spec) {
  double m = 0.0;
  for (const auto& s : a.states) m = std::max(m, norm(bank, s, spec));
  return m;
}

Table series_table(const std::vector<std::string>& cols) { return Table{cols, {}}; }

}  // namespace

void DependenceConfig::validate(const LPFilterBank& bank) const {
  norm_spec.validate();
  norm_spec.with_s(norm_spec.s - 1.0).validate();
  solver.validate();
  if (!std::is_sorted(N_list.begin(), N_list.end()) ||
      std::adjacent_find(N_list.begin(), N_list.end()) != N_list.end())
    throw ArgumentError("N_list must be strictly increasing");
  for (int N : N_list)
    if (N < 0 || N > bank.j_max()) throw ArgumentError("mollification level outside 0..j_max");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ArgumentError("perturbation sizes must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw ArgumentError("eps_list must be strictly decreasing");
  }
}

ExperimentReport boundedness_experiment(const LPFilterBank& bank, const VectorField& u0, const DependenceConfig& cfg) {
  check_data(bank, u0, "boundedness_experiment");
  cfg.validate(bank);
  const double n0 = norm(bank, u0, cfg.norm_spec);
  if (n0 == 0.0) throw DegenerateInputError("zero initial data");
  const NormSpec specs[] = {cfg.norm_spec};
  const Trajectory tr = solve(u0, cfg.solver, specs);
  auto rep = base_report("boundedness", bank, cfg);
  Table t = series_table({"t", "norm", "ratio"});
  double worst = 0.0;
  for (const auto& dg : tr.diagnostics) {
    const double r = dg.norms.front() / n0;
    worst = std::max(worst, r);
    t.add_row({dg.time, dg.norms.front(), r});
  }
  rep.ratios = {worst};
  rep.extra["initial_norm"] = n0;
  Plot plot{"norm along the solution", "t", "||u(t)|| / ||u0||", false, t.column("t"), {{"ratio", t.column("ratio")}}};
  rep.tables["history"] = std::move(t);
  rep.plots["history"] = std::move(plot);
  return rep;
}

ExperimentReport lipschitz_lowernorm_experiment(const LPFilterBank& bank, const VectorField& u0,
                                                const VectorField& w, const DependenceConfig& cfg) {
  check_data(bank, u0, "lipschitz_lowernorm_experiment");
  check_data(bank, w, "lipschitz_lowernorm_experiment");
  cfg.validate(bank);
  if (cfg.eps_list.empty()) throw ArgumentError("eps_list is empty");
  const NormSpec lower = cfg.norm_spec.with_s(cfg.norm_spec.s - 1.0);
  const double wn = norm(bank, w, lower);
  if (wn == 0.0) throw DegenerateInputError("perturbation direction has zero norm, so v0 = u0");
  const VectorField unit = to_spectral((1.0 / wn) * w);
  const VectorField U0 = to_spectral(u0);
  const Trajectory base = solve(U0, cfg.solver);

  auto rep = base_report("lipschitz_lowernorm", bank, cfg);
  Table t = series_table({"eps", "data_distance", "sup_distance", "L"});
  for (double eps : cfg.eps_list) {
    VectorField v0 = U0 + eps * unit;
    v0.div_free = true;
    const double dd = norm(bank, U0 - v0, lower);
    if (dd == 0.0) throw DegenerateInputError("perturbation lost to roundoff at eps = " + std::to_string(eps));
    const double sd = sup_difference(bank, base, solve(v0, cfg.solver), lower);
    const double L = sd / dd;
    rep.ratios.push_back(L);
    t.add_row({eps, dd, sd, L});
  }
  Plot plot{"Lipschitz modulus in the lower norm", "log10 eps", "L(eps)", false, {}, {{"L", rep.ratios}}};
  for (double eps : cfg.eps_list) plot.x.push_back(std::log10(eps));
  rep.tables["moduli"] = std::move(t);
  rep.plots["moduli"] = std::move(plot);
  rep.extra["variation"] = json_number(rep.max() / rep.min());
  return rep;
}

ExperimentReport lipschitz_lowernorm_experiment(const LPFilterBank& bank, const VectorField& u0,
                                                const DependenceConfig& cfg) {
  const double k_hi = std::min(4.0, bank.grid().n() / 2 - 1.0);
  return lipschitz_lowernorm_experiment(bank, u0, random_vector(bank.grid(), {0.0, 1.0, k_hi, cfg.seed + 1000}), cfg);
}

ExperimentReport bona_smith_experiment(const LPFilterBank& bank, const VectorField& u0, const DependenceConfig& cfg) {
  check_data(bank, u0, "bona_smith_experiment");
  cfg.validate(bank);
  if (cfg.N_list.empty()) throw ArgumentError("N_list is empty");
  const NormSpec& spec = cfg.norm_spec;
  const NormSpec upper = spec.with_s(spec.s + 1.0);
  const VectorField U0 = to_spectral(u0);
  const double n0 = norm(bank, U0, spec);
  if (n0 == 0.0) throw DegenerateInputError("zero initial data");

  std::vector<VectorField> data;
  std::vector<double> tails;
  for (int N : cfg.N_list) {
    VectorField uN = p_le(bank, U0, N);
    uN.div_free = true;
    const double tail = norm(bank, U0 - uN, spec);
    if (tail == 0.0)
      throw DegenerateInputError("u0 equals its mollification at level N = " + std::to_string(N) + ", no tail left");
    data.push_back(std::move(uN));
    tails.push_back(tail);
  }

  const Trajectory base = solve(U0, cfg.solver);
  auto rep = base_report("bona_smith", bank, cfg);
  Table t = series_table({"N", "tail", "sup_distance", "rho", "sup_upper_norm", "sigma"});
  nlohmann::json sigmas = nlohmann::json::array();
  std::vector<double> sig;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int N = cfg.N_list[i];
    const Trajectory mol = solve(data[i], cfg.solver);
    const double dist = sup_difference(bank, base, mol, spec);
    const double up = sup_norm_of(bank, mol, upper);
    const double rho = dist / tails[i];
    const double sigma = up / (std::exp2(N) * n0);
    rep.ratios.push_back(rho);
    sig.push_back(sigma);
    sigmas.push_back(json_number(sigma));
    t.add_row({static_cast<double>(N), tails[i], dist, rho, up, sigma});
  }
  std::vector<double> xs;
  for (int N : cfg.N_list) xs.push_back(N);
  rep.tables["levels"] = std::move(t);
  rep.plots["levels"] = Plot{"mollification levels", "N", "ratio", true, xs, {{"rho", rep.ratios}, {"sigma", sig}}};
  rep.extra["sigma"] = sigmas;
  rep.extra["rho_spread"] = json_number(rep.max() / rep.min());
  return rep;
}

ExperimentReport continuity_assembly(const LPFilterBank& bank, const VectorField& u0, const VectorField& psi,
                                     const DependenceConfig& cfg) {
  check_data(bank, u0, "continuity_assembly");
  check_data(bank, psi, "continuity_assembly");
  cfg.validate(bank);
  if (cfg.N_list.empty()) throw ArgumentError("N_list is empty");
  const NormSpec& spec = cfg.norm_spec;
  const NormSpec lower = spec.with_s(spec.s - 1.0), upper = spec.with_s(spec.s + 1.0);
  const VectorField U0 = to_spectral(u0), PSI = to_spectral(psi);
  const Trajectory tu = solve(U0, cfg.solver), tp = solve(PSI, cfg.solver);
  const double direct = sup_difference(bank, tu, tp, spec);

  auto rep = base_report("continuity_assembly", bank, cfg);
  Table t = series_table({"N", "tail_u0", "tail_psi", "mid_lower", "mid_upper", "mid_bound", "chain", "direct", "ratio"});
  for (int N : cfg.N_list) {
    VectorField uN = p_le(bank, U0, N), pN = p_le(bank, PSI, N);
    uN.div_free = pN.div_free = true;
    const Trajectory tuN = solve(uN, cfg.solver), tpN = solve(pN, cfg.solver);
    const double tail_u = sup_difference(bank, tu, tuN, spec);
    const double tail_p = sup_difference(bank, tp, tpN, spec);
    const double lo = sup_difference(bank, tuN, tpN, lower);
    const double hi = sup_difference(bank, tuN, tpN, upper);
    const double mid = std::sqrt(lo * hi);
    const double chain = tail_u + mid + tail_p;
    const double ratio = chain == 0.0 ? (direct == 0.0 ? 0.0 : std::numeric_limits<double>::infinity()) : direct / chain;
    rep.ratios.push_back(ratio);
    t.add_row({static_cast<double>(N), tail_u, tail_p, lo, hi, mid, chain, direct, ratio});
  }
  rep.extra["direct"] = json_number(direct);
  rep.extra["slack"] = 1.05;
  rep.extra["chain_dominates"] = rep.max() <= 1.05;
  rep.tables["chain"] = std::move(t);
  rep.notes.push_back("chain = tail(u0) + sqrt(sup ||d_N||_{F^{s-1}} sup ||d_N||_{F^{s+1}}) + tail(psi); "
                      "the chain dominates when direct / chain <= 1.05");
  return rep;
}

double interpolation_ratio(const LPFilterBank& bank, const VectorField& f, const NormSpec& spec) {
  const double mid = norm(bank, f, spec);
  const double lo = norm(bank, f, spec.with_s(spec.s - 1.0)), hi = norm(bank, f, spec.with_s(spec.s + 1.0));
  if (lo == 0.0 || hi == 0.0) throw DegenerateInputError("zero field in interpolation_ratio");
  return mid / std::sqrt(lo * hi);
}

VectorField broadband_data(const Grid& grid, double decay, std::uint64_t seed) {
  return scaled_to_sup(random_vector(grid, {decay, 1.0, static_cast<double>(grid.dealias_cutoff()), seed}), 1.0);
}

}  // namespace lpflow
