#pragma once

#include <span>
#include <string>
#include <vector>

#include "lpflow/norms.hpp"
#include "lpflow/report.hpp"

namespace lpflow {

/// f g = T_f g + T_g f + R(f, g) with
///   T_f g  = sum_k S_{k-3} f Delta_k g   (S_m includes the mean, S_m = mean for m <= 0)
///   R(f,g) = mean(f) mean(g) + sum_{|j-k| <= 3} Delta_j f Delta_k g.
/// Every product is dealiased, so the pieces add up to the dealiased product.
struct BonyPieces {
  GridField T_fg;
  GridField T_gf;
  GridField R_fg;
};

BonyPieces bony(const LPFilterBank& bank, const GridField& f, const GridField& g);

/// c_j = f . grad(Delta_j g) - Delta_j(f . grad g), products dealiased.
/// f must be divergence free; 0 <= j <= j_max.
GridField commutator(const LPFilterBank& bank, const VectorField& f, const GridField& g, int j);

struct CommutatorSequence {
  std::vector<GridField> blocks;  // j = 0 .. j_max, physical
};

CommutatorSequence commutator_sequence(const LPFilterBank& bank, const VectorField& f, const GridField& g);

/// ||(sum_j |2^{js} c_j|^q)^{1/q}||_{L^p}.
double commutator_lhs(const CommutatorSequence& seq, double s, double p, double q);

/// ||fg||_F / (||f||_inf ||g||_F + ||g||_inf ||f||_F) in the given norm.
double verify_moser(const LPFilterBank& bank, const GridField& f, const GridField& g, const NormSpec& spec);

enum class TransportForm { gradient, split };

/// ||u . grad v||_F over
///   gradient: ||u||_inf ||grad v||_F + ||grad v||_inf ||u||_F
///   split:    ||u||_inf ||grad v||_F + ||v||_inf ||grad u||_F.
/// v may have any number of components. Returns 0 when the left side is 0.
double verify_moser_transport(const LPFilterBank& bank, const VectorField& u, const VectorField& v,
                              const NormSpec& spec, TransportForm form);

enum class CommutatorForm { nonendpoint, endpoint };

/// commutator_lhs over
///   nonendpoint: ||grad f||_inf ||g||_F + ||grad g||_inf ||f||_F
///   endpoint:    ||grad f||_inf ||g||_F + ||g||_inf ||grad f||_F.
/// Returns 0 when the commutator vanishes.
double verify_commutator_estimate(const LPFilterBank& bank, const VectorField& f, const GridField& g,
                                  const NormSpec& spec, CommutatorForm form);

/// Frobenius field of the Jacobian: all d * m components d_b v_a.
std::vector<GridField> gradient_components(const VectorField& v);

enum class ScanFamily { lacunary, modulated_bump, random };

ScanFamily parse_scan_family(const std::string& name);
std::string to_string(ScanFamily f);

/// Test pair (u, g) at scale N, top frequency K = min(2^N, n/3).
struct ScanPair {
  VectorField u;
  GridField g;
  int K = 0;
};
ScanPair scan_pair(const Grid& grid, ScanFamily family, int N, double s, std::uint64_t seed);

/// ratio(N) = ||2^{js}[u, Delta_j] . grad g||_{L^p l^q} / (||u||_{F^s_{p,q}} ||grad g||_{F^s_{p,q}})
/// for each N; reports the profile without asserting growth or decay.
ExperimentReport counterexample_scan(const LPFilterBank& bank, ScanFamily family, double s, double p, double q,
                                     std::span<const int> scales, std::uint64_t seed = 0);

}  // namespace lpflow
