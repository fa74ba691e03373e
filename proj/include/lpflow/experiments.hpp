#pragma once

#include <cstdint>
#include <vector>

#include "lpflow/euler.hpp"
#include "lpflow/filter_bank.hpp"
#include "lpflow/report.hpp"

namespace lpflow {

/// Settings shared by the solution-map experiments.
struct DependenceConfig {
  NormSpec norm_spec = NormSpec::tl(3.0, 1.0, 1.0);
  std::vector<int> N_list{3, 4, 5};                 // mollification levels, increasing
  std::vector<double> eps_list{1e-1, 1e-2, 1e-3, 1e-4};  // perturbation sizes, decreasing
  SolverConfig solver{1e-3, 0.2, true, 0.5, 10};
  std::uint64_t seed = 0;

  /// Checks the lists against the bank's j_max and the norm parameters.
  void validate(const LPFilterBank& bank) const;
};

/// sup_t ||S_t(u0)||_{F^s} / ||u0||_{F^s}.
ExperimentReport boundedness_experiment(const LPFilterBank& bank, const VectorField& u0, const DependenceConfig& cfg);

/// L(eps) = sup_t ||S_t(u0) - S_t(u0 + eps w)||_{F^{s-1}} / ||eps w||_{F^{s-1}} for every eps in
/// eps_list, with w rescaled to unit F^{s-1} norm. Throws DegenerateInputError for w = 0.
ExperimentReport lipschitz_lowernorm_experiment(const LPFilterBank& bank, const VectorField& u0,
                                                const VectorField& w, const DependenceConfig& cfg);
/// Same with w drawn from cfg.seed: a divergence-free field on 1 <= |k| <= 4.
ExperimentReport lipschitz_lowernorm_experiment(const LPFilterBank& bank, const VectorField& u0,
                                                const DependenceConfig& cfg);

/// For N in N_list, with u^N = S(P_{<=N} u0):
///   rho(N)   = sup_t ||u - u^N||_{F^s} / ||u0 - P_{<=N} u0||_{F^s}
///   sigma(N) = sup_t ||u^N||_{F^{s+1}} / (2^N ||u0||_{F^s}).
/// ratios holds rho; sigma sits in the "levels" table and in extra.
ExperimentReport bona_smith_experiment(const LPFilterBank& bank, const VectorField& u0, const DependenceConfig& cfg);

/// Splits S(u0) - S(psi) at each level N into two mollification tails and
/// the mollified-data difference d_N, bounded through
///   ||d_N||_{F^s} <= ||d_N||^{1/2}_{F^{s-1}} ||d_N||^{1/2}_{F^{s+1}},
/// and compares the chain with the direct difference (sup over recorded
/// times throughout). ratios holds direct / chain per level.
ExperimentReport continuity_assembly(const LPFilterBank& bank, const VectorField& u0, const VectorField& psi,
                                     const DependenceConfig& cfg);

/// ||f||_{F^s} / (||f||_{F^{s-1}} ||f||_{F^{s+1}})^{1/2}.
double interpolation_ratio(const LPFilterBank& bank, const VectorField& f, const NormSpec& spec);

/// Broadband div-free test data: spectrum std |k|^-decay on 1 <= |k| <= n/3,
/// scaled to unit sup norm.
VectorField broadband_data(const Grid& grid, double decay, std::uint64_t seed);

}  // namespace lpflow
