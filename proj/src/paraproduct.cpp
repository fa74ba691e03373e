#include "lpflow/paraproduct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lpflow/errors.hpp"
#include "lpflow/euler.hpp"
#include "lpflow/random_field.hpp"
#include "lpflow/spectral.hpp"

namespace lpflow {

namespace {

void same_grid(const LPFilterBank& bank, const Grid& g) {
  if (!(bank.grid() == g)) throw ArgumentError("field grid does not match the filter bank grid");
}

std::vector<GridField> blocks_of(const LPFilterBank& bank, const GridField& spec) {
  std::vector<GridField> out;
  for (int j = 0; j <= bank.j_max(); ++j) out.push_back(apply_multiplier(spec, bank.psi(j)));
  return out;
}

GridField sum_fields(const Grid& g, const std::vector<GridField>& terms) {
  std::vector<double> acc(g.size(), 0.0);
  for (const auto& t : terms) {
    const GridField p = to_physical(t);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += p[i].real();
  }
  return GridField::from_real(g, acc);
}

void require_div_free(const VectorField& u, const char* who) {
  if (!is_div_free(u)) throw ArgumentError(std::string(who) + " needs a divergence-free vector field");
}

double sup(std::span<const GridField> comps) { return lp_norm(comps, kInf); }

}  // namespace

BonyPieces bony(const LPFilterBank& bank, const GridField& f, const GridField& g) {
  if (!(f.grid() == g.grid())) throw ArgumentError("bony: fields live on different grids");
  same_grid(bank, f.grid());
  const Grid& grid = f.grid();
  const GridField F = to_spectral(f), G = to_spectral(g);
  const auto df = blocks_of(bank, F), dg = blocks_of(bank, G);
  const int J = bank.j_max();

  std::vector<GridField> tfg, tgf, r;
  for (int k = 0; k <= J; ++k) {
    tfg.push_back(dealiased_product(apply_multiplier(F, bank.low_pass(k - 3)), dg[static_cast<std::size_t>(k)]));
    tgf.push_back(dealiased_product(apply_multiplier(G, bank.low_pass(k - 3)), df[static_cast<std::size_t>(k)]));
  }
  r.push_back(dealiased_product(apply_multiplier(F, bank.low_pass(-1)), apply_multiplier(G, bank.low_pass(-1))));
  for (int j = 0; j <= J; ++j) {
    std::vector<cplx> near(grid.size());
    for (int k = std::max(0, j - 3); k <= std::min(J, j + 3); ++k) {
      const auto& b = dg[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < near.size(); ++i) near[i] += b[i];
    }
    r.push_back(dealiased_product(df[static_cast<std::size_t>(j)], GridField(grid, Rep::spectral, std::move(near), g.is_real())));
  }
  return {sum_fields(grid, tfg), sum_fields(grid, tgf), sum_fields(grid, r)};
}

namespace {

// The mean of f commutes with Delta_j exactly, so only the fluctuation enters the products.
struct CommutatorInputs {
  std::vector<GridField> f;      // mean-free components
  std::vector<GridField> dg;     // spectral d_l g
  GridField transport;           // dealiased f . grad g, spectral
};

CommutatorInputs prepare(const LPFilterBank& bank, const VectorField& f, const GridField& g) {
  require_div_free(f, "commutator");
  if (!(f.grid() == g.grid())) throw ArgumentError("commutator: fields live on different grids");
  same_grid(bank, g.grid());
  CommutatorInputs in;
  for (const auto& c : f.components) {
    const bool real = c.is_real();
    auto values = to_spectral(c).release();
    values[0] = 0.0;
    in.f.emplace_back(c.grid(), Rep::spectral, std::move(values), real);
  }
  const GridField G = to_spectral(g);
  std::vector<GridField> terms;
  for (int l = 0; l < f.dim(); ++l) {
    in.dg.push_back(derivative(G, l));
    terms.push_back(dealiased_product(in.f[static_cast<std::size_t>(l)], in.dg.back()));
  }
  in.transport = to_spectral(sum_fields(g.grid(), terms));
  return in;
}

GridField commutator_block(const LPFilterBank& bank, const CommutatorInputs& in, int j) {
  std::vector<GridField> terms;
  for (std::size_t l = 0; l < in.f.size(); ++l)
    terms.push_back(dealiased_product(in.f[l], apply_multiplier(in.dg[l], bank.psi(j))));
  terms.push_back(-1.0 * to_physical(apply_multiplier(in.transport, bank.psi(j))));
  return sum_fields(in.transport.grid(), terms);
}

}  // namespace

GridField commutator(const LPFilterBank& bank, const VectorField& f, const GridField& g, int j) {
  if (j < 0 || j > bank.j_max()) throw ArgumentError("commutator block index out of range");
  return commutator_block(bank, prepare(bank, f, g), j);
}

CommutatorSequence commutator_sequence(const LPFilterBank& bank, const VectorField& f, const GridField& g) {
  const auto in = prepare(bank, f, g);
  CommutatorSequence seq;
  for (int j = 0; j <= bank.j_max(); ++j) seq.blocks.push_back(commutator_block(bank, in, j));
  return seq;
}

double commutator_lhs(const CommutatorSequence& seq, double s, double p, double q) {
  if (seq.blocks.empty()) throw ArgumentError("empty commutator sequence");
  NormSpec{s, p, q}.validate();
  const Grid& g = seq.blocks.front().grid();
  const bool qinf = std::isinf(q);
  std::vector<double> agg(g.size(), 0.0);
  for (std::size_t j = 0; j < seq.blocks.size(); ++j) {
    const double w = std::exp2(static_cast<double>(j) * s);
    const GridField& c = seq.blocks[j];
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double v = w * std::abs(c[i]);
      if (qinf) agg[i] = std::max(agg[i], v);
      else agg[i] += q == 1.0 ? v : std::pow(v, q);
    }
  }
  if (!qinf && q != 1.0)
    for (auto& x : agg) x = std::pow(x, 1.0 / q);
  return lp_norm(GridField::from_real(g, agg), p);
}

std::vector<GridField> gradient_components(const VectorField& v) {
  std::vector<GridField> out;
  for (const auto& c : v.components) {
    const GridField spec = to_spectral(c);
    for (int b = 0; b < c.grid().dim(); ++b) out.push_back(derivative(spec, b));
  }
  return out;
}

double verify_moser(const LPFilterBank& bank, const GridField& f, const GridField& g, const NormSpec& spec) {
  if (!(spec.s > 0.0)) throw ArgumentError("Moser estimate needs s > 0");
  same_grid(bank, f.grid());
  const double nf = norm(bank, f, spec), ng = norm(bank, g, spec);
  const double sf = lp_norm(f, kInf), sg = lp_norm(g, kInf);
  if (sf == 0.0 || sg == 0.0) throw DegenerateInputError("zero factor in verify_moser");
  const double rhs = sf * ng + sg * nf;
  if (rhs == 0.0) throw DegenerateInputError("zero right-hand side in verify_moser");
  return norm(bank, dealiased_product(f, g), spec) / rhs;
}

double verify_moser_transport(const LPFilterBank& bank, const VectorField& u, const VectorField& v,
                              const NormSpec& spec, TransportForm form) {
  if (!(spec.s > -1.0)) throw ArgumentError("transport Moser estimate needs s > -1");
  require_div_free(u, "verify_moser_transport");
  same_grid(bank, u.grid());
  const int d = u.dim();
  std::vector<GridField> adv;
  for (const auto& comp : v.components) {
    const GridField spec_v = to_spectral(comp);
    std::vector<GridField> terms;
    for (int l = 0; l < d; ++l) terms.push_back(dealiased_product(u[l], derivative(spec_v, l)));
    adv.push_back(sum_fields(u.grid(), terms));
  }
  const double lhs = norm(bank, adv, spec);
  if (lhs == 0.0) return 0.0;
  const auto grad_v = gradient_components(v);
  double rhs = lp_norm(u, kInf) * norm(bank, grad_v, spec);
  if (form == TransportForm::gradient) {
    rhs += sup(grad_v) * norm(bank, u, spec);
  } else {
    rhs += lp_norm(v, kInf) * norm(bank, gradient_components(u), spec);
  }
  if (rhs == 0.0) throw DegenerateInputError("zero right-hand side in verify_moser_transport");
  return lhs / rhs;
}

double verify_commutator_estimate(const LPFilterBank& bank, const VectorField& f, const GridField& g,
                                  const NormSpec& spec, CommutatorForm form) {
  if (form == CommutatorForm::nonendpoint && !(spec.s > 0.0)) throw ArgumentError("the nonendpoint commutator estimate needs s > 0");
  if (form == CommutatorForm::endpoint && !(spec.s > -1.0)) throw ArgumentError("the endpoint commutator estimate needs s > -1");
  const auto seq = commutator_sequence(bank, f, g);
  const double lhs = commutator_lhs(seq, spec.s, spec.p, spec.q);
  if (lhs == 0.0) return 0.0;
  const auto grad_f = gradient_components(f);
  const GridField G = to_spectral(g);
  std::vector<GridField> gg;
  for (int b = 0; b < g.grid().dim(); ++b) gg.push_back(derivative(G, b));
  double rhs = sup(grad_f) * norm(bank, g, spec);
  if (form == CommutatorForm::nonendpoint) {
    rhs += sup(gg) * norm(bank, f, spec);
  } else {
    rhs += lp_norm(g, kInf) * norm(bank, grad_f, spec);
  }
  if (rhs == 0.0) throw DegenerateInputError("zero right-hand side in verify_commutator_estimate");
  return lhs / rhs;
}

ScanFamily parse_scan_family(const std::string& name) {
  if (name == "lacunary") return ScanFamily::lacunary;
  if (name == "modulated-bump" || name == "modulated_bump") return ScanFamily::modulated_bump;
  if (name == "random") return ScanFamily::random;
  throw ArgumentError("unknown scan family '" + name + "'");
}

std::string to_string(ScanFamily f) {
  switch (f) {
    case ScanFamily::lacunary:
      return "lacunary";
    case ScanFamily::modulated_bump:
      return "modulated-bump";
    case ScanFamily::random:
      return "random";
  }
  return "?";
}

ScanPair scan_pair(const Grid& grid, ScanFamily family, int N, double s, std::uint64_t seed) {
  if (N < 1) throw ArgumentError("scan scale N must be >= 1");
  const int d = grid.dim();
  const int K = std::min(1 << std::min(N, 20), grid.dealias_cutoff());
  const double pi = std::numbers::pi;
  auto shear = [&](auto&& profile) {
    std::vector<GridField> c(static_cast<std::size_t>(d), GridField::zeros(grid));
    c[1] = GridField::sample(grid, [&](auto x) { return profile(x[0]); });
    return leray_project(to_spectral(VectorField(std::move(c), false)));
  };
  ScanPair out;
  out.K = K;
  switch (family) {
    case ScanFamily::lacunary: {
      const int M = static_cast<int>(std::floor(std::log2(K)));
      out.u = shear([&](double x) {
        double a = 0.0;
        for (int m = 1; m <= M; ++m) a += std::exp2(-m * s) * std::cos(std::exp2(m) * x);
        return a;
      });
      out.g = GridField::sample(grid, [&](auto x) {
        double b = 0.0;
        for (int m = 1; m <= M; ++m) b += std::exp2(-m * (s + 1)) * std::sin(std::exp2(m) * x[1]);
        return b;
      });
      break;
    }
    case ScanFamily::modulated_bump: {
      auto bump = [&](double x) { return std::exp(-(x - pi) * (x - pi) / (2.0 * 0.5 * 0.5)); };
      out.u = shear([&](double x) { return bump(x) * std::cos(K * x); });
      out.g = GridField::sample(grid, [&](auto x) { return bump(x[0]) * bump(x[1]) * std::sin(K * x[1]) / K; });
      break;
    }
    case ScanFamily::random: {
      const double lo = std::max(1.0, K / 2.0);
      out.u = random_vector(grid, {0.0, lo, static_cast<double>(K), seed});
      out.g = random_scalar(grid, {0.0, lo, static_cast<double>(K), seed + 1});
      break;
    }
  }
  return out;
}

ExperimentReport counterexample_scan(const LPFilterBank& bank, ScanFamily family, double s, double p, double q,
                                     std::span<const int> scales, std::uint64_t seed) {
  const NormSpec spec = NormSpec::tl(s, p, q);
  spec.validate();
  const Grid& grid = bank.grid();
  ExperimentReport rep;
  rep.estimate_id = "counterexample_scan_" + to_string(family);
  rep.s = s;
  rep.p = p;
  rep.q = q;
  rep.d = grid.dim();
  rep.n = grid.n();
  rep.seeds = {seed};
  Table t{{"N", "K", "lhs", "norm_u", "norm_grad_g", "ratio"}, {}};
  for (int N : scales) {
    const auto pair = scan_pair(grid, family, N, s, seed);
    const double lhs = commutator_lhs(commutator_sequence(bank, pair.u, pair.g), s, p, q);
    const double nu = tl_norm(bank, pair.u, spec);
    const auto grad = gradient_components(VectorField({pair.g}, false));
    const double nv = tl_norm(bank, grad, spec);
    const double ratio = (nu == 0.0 || nv == 0.0) ? std::nan("") : lhs / (nu * nv);
    t.add_row({static_cast<double>(N), static_cast<double>(pair.K), lhs, nu, nv, ratio});
    rep.ratios.push_back(ratio);
  }
  rep.tables["profile"] = t;
  Plot plot{"commutator ratio profile (" + to_string(family) + ")", "N", "ratio", true, {}, {}};
  for (int N : scales) plot.x.push_back(N);
  plot.series.push_back({"ratio", rep.ratios});
  rep.plots["profile"] = plot;
  rep.notes.push_back("scale N uses top frequency K = min(2^N, n/3); growth is reported, not asserted");
  rep.notes.push_back("commutator taken as [u, Delta_j] . grad g with scalar g; norms are inhomogeneous F^s_{p,q}");
  const double critical = 1.0 + static_cast<double>(grid.dim()) / p;
  rep.notes.push_back(s < critical ? "regime s < 1 + d/p: the estimate is expected to fail"
                                   : "regime s >= 1 + d/p: covered by the endpoint commutator estimate");
  return rep;
}

}  // namespace lpflow
