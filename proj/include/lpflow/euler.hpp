#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lpflow/field.hpp"
#include "lpflow/norms.hpp"

namespace lpflow {

/// Fixed-step RK4 settings. The step count is ceil(T/dt) and the step is
/// shrunk so that the last step lands exactly on T.
struct SolverConfig {
  double dt = 1e-3;
  double T = 1.0;
  bool dealias = true;
  double cfl_guard = 0.5;  // max ||u||_inf dt / dx
  int record_every = 1;    // snapshot cadence in steps

  void validate() const;
  int steps() const;
  double step() const { return T / steps(); }
};

/// Leray projection (I - k k^T / |k|^2) per mode; the mean is unchanged.
/// Output keeps the input representation and is flagged div_free.
VectorField leray_project(const VectorField& u);

/// Dealiased (a . grad) b, returned spectral.
VectorField advection(const VectorField& a, const VectorField& b, bool dealias = true);

/// grad (-Laplacian)^{-1} div(u . grad u) with the zero-mean pressure.
VectorField pressure_gradient(const VectorField& u, bool dealias = true);

/// -P(u . grad u), spectral and divergence free.
VectorField euler_rhs(const VectorField& u, bool dealias = true);

/// u = (sin x cos y, -cos x sin y) in 2D; in 3D the classical
/// (sin x cos y cos z, -cos x sin y cos z, 0). Spectral, div_free.
VectorField taylor_green(const Grid& grid);

/// Scalar vorticity in 2D, the vorticity components in 3D.
std::vector<GridField> vorticity(const VectorField& u);

struct Diagnostics {
  double time = 0.0;
  double energy = 0.0;     // (1/2) ||u||_{L^2}^2
  double enstrophy = 0.0;  // (1/2) ||omega||_{L^2}^2
  std::vector<double> norms;
};

Diagnostics diagnose(const VectorField& u, double time, const LPFilterBank* bank, std::span<const NormSpec> specs);

struct Trajectory {
  std::vector<double> times;
  std::vector<VectorField> states;  // spectral
  std::vector<Diagnostics> diagnostics;
  std::vector<NormSpec> norm_specs;

  const Grid& grid() const { return states.front().grid(); }
  std::size_t size() const noexcept { return times.size(); }
};

VectorField solve_state(const VectorField& u0, const SolverConfig& cfg);
Trajectory solve(const VectorField& u0, const SolverConfig& cfg, std::span<const NormSpec> record = {});

/// Particle positions X(alpha, t) for seeds alpha on a uniform m^d grid.
struct FlowMap {
  Grid seed_grid;
  std::vector<double> times;
  std::vector<std::vector<std::array<double, 3>>> positions;  // [time][seed]

  /// X - alpha as a periodic vector field on the seed grid.
  VectorField displacement(std::size_t time_index) const;
};

struct FlowMapOptions {
  int seeds_per_axis = 0;    // 0: the trajectory's own grid size
  double prune_tol = 0.0;    // skip modes with |u_k| <= prune_tol * max |u_k|
};

/// RK4 particle tracking through the recorded snapshots. The particle step is
/// twice the snapshot spacing so that every stage velocity is a recorded
/// state; requested times must be reachable with that step.
FlowMap flow_map(const Trajectory& traj, std::span<const double> times, const FlowMapOptions& opts = {});

/// Trigonometric interpolation of a spectral vector field at one point.
std::array<double, 3> interpolate(const VectorField& u, const std::array<double, 3>& x);

/// det(I + grad D) for a displacement field D, with spectral derivatives.
GridField jacobian_determinant(const VectorField& displacement);

/// Writes fields/state_XXXX.lpf plus manifest.json into dir.
void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir);

// Raw spectral state: d component arrays of unitary coefficients. Used by the
// time integrators here and in the iteration ladder.
using SpectralState = std::vector<std::vector<cplx>>;

SpectralState to_state(const VectorField& u);
VectorField from_state(const Grid& grid, const SpectralState& s, bool div_free = true);

/// Evaluates -P((a . grad) b) on raw spectral states with reusable buffers.
class TransportOperator {
 public:
  TransportOperator(const Grid& grid, bool dealias);

  void apply(const SpectralState& a, const SpectralState& b, SpectralState& out);
  /// (a . grad) b without the projection or the sign.
  void advect(const SpectralState& a, const SpectralState& b, SpectralState& out);
  void project(SpectralState& s) const;
  /// Max pointwise Euclidean magnitude.
  double sup_norm(const SpectralState& s);
  const Grid& grid() const noexcept { return grid_; }

 private:
  Grid grid_;
  bool dealias_;
  std::vector<double> mask_;
  std::vector<cplx> work_;
  std::vector<std::vector<cplx>> phys_a_;
  std::vector<double> acc_re_;
};

/// Courant number ||u||_inf dt / dx.
double courant_number(double sup, double dt, const Grid& grid);

}  // namespace lpflow
