#pragma once

#include <filesystem>
#include <vector>

#include "lpflow/euler.hpp"
#include "lpflow/filter_bank.hpp"
#include "lpflow/report.hpp"

namespace lpflow {

/// Successive approximations u^(0) = 0 and, for m >= 1,
///   d_t u^(m) = -P(u^(m-1) . grad u^(m)),   u^(m)(0) = P_{<=m} u0.
struct IterationLadder {
  std::vector<Trajectory> members;  // u^(0) .. u^(M), same snapshot times
  NormSpec norm_spec;               // diagnostics norm F^s; delta uses F^{s-1}
  /// delta[m - 1] = sup_t ||u^(m) - u^(m-1)||_{F^{s-1}} for m = 1 .. M, the
  /// sup taken over every time step.
  std::vector<double> delta;

  int M() const noexcept { return static_cast<int>(members.size()) - 1; }
  double delta_at(int m) const;
  /// sup_t ||u^(m)(t)|| in norm_spec for m = 0 .. M.
  std::vector<double> sup_norms() const;
  /// Final state of u^(M).
  const VectorField& limit() const { return members.back().states.back(); }
};

/// Integrates all members together as one triangular system with RK4, so
/// every stage of member m is advected by the matching stage of member m-1.
/// Each member is re-projected after every step. Throws StabilityError
/// tagged with the member index when a member breaks the CFL guard.
IterationLadder iterate(const LPFilterBank& bank, const VectorField& u0, int M, const SolverConfig& cfg,
                        const NormSpec& norm_spec);

/// delta_m and the consecutive ratios delta_{m+1} / delta_m.
ExperimentReport cauchy_report(const IterationLadder& ladder);

/// ||u^(M)(T) - reference||_{F^{s-1}}.
double ladder_distance(const LPFilterBank& bank, const IterationLadder& ladder, const VectorField& reference);

/// members/member_XX.lpf (final states) and manifest.json with
/// {M, norm_spec, delta, ratios, member_files}.
void write_ladder(const IterationLadder& ladder, const std::filesystem::path& dir);

}  // namespace lpflow
