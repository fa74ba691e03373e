#include "lpflow/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lpflow/errors.hpp"
#include "lpflow/spectral.hpp"

namespace lpflow {

void NormSpec::validate() const {
  if (!(p >= 1.0)) throw ArgumentError("norm integrability p must be >= 1");
  if (!(q >= 1.0)) throw ArgumentError("norm summability q must be >= 1");
  if (!std::isfinite(s)) throw ArgumentError("norm regularity s must be finite");
  if (flavor == Flavor::triebel_lizorkin && std::isinf(p))
    throw ArgumentError("Triebel-Lizorkin norms are defined for p < infinity only");
}

std::string NormSpec::describe() const {
  auto fmt = [](double x) {
    if (std::isinf(x)) return std::string("inf");
    std::ostringstream os;
    os << x;
    return os.str();
  };
  std::string out = homogeneous ? "hom " : "";
  out += flavor == Flavor::triebel_lizorkin ? "F" : "B";
  return out + "^" + fmt(s) + "_{" + fmt(p) + "," + fmt(q) + "}";
}

namespace {

// L^p of a nonnegative sample array; fixed summation order.
double lp_of_magnitude(std::span<const double> a, double p, double weight) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : a) m = std::max(m, x);
    return m;
  }
  double sum = 0.0;
  if (p == 1.0) {
    for (double x : a) sum += x;
    return sum * weight;
  }
  if (p == 2.0) {
    for (double x : a) sum += x * x;
    return std::sqrt(sum * weight);
  }
  for (double x : a) sum += std::pow(x, p);
  return std::pow(sum * weight, 1.0 / p);
}

std::vector<double> pointwise_magnitude(std::span<const GridField> comps) {
  const std::size_t n = comps.front().size();
  std::vector<double> mag(n, 0.0);
  for (const auto& c : comps) {
    const GridField phys = to_physical(c);
    for (std::size_t i = 0; i < n; ++i) mag[i] += std::norm(phys[i]);
  }
  for (auto& x : mag) x = std::sqrt(x);
  return mag;
}

void check_components(std::span<const GridField> comps) {
  if (comps.empty()) throw ArgumentError("norm of an empty component list");
}

std::vector<double> magnitude_of_multiplied(const std::vector<GridField>& spectra, std::span<const double> mult) {
  const std::size_t n = spectra.front().size();
  std::vector<double> mag(n, 0.0);
  std::vector<cplx> buf(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (const auto& s : spectra) {
    for (std::size_t i = 0; i < n; ++i) buf[i] = s[i] * mult[i];
    fft_inplace(s.grid(), buf, +1);
    if (s.is_real()) {
      for (std::size_t i = 0; i < n; ++i) {
        const double re = buf[i].real() * scale;
        mag[i] += re * re;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) mag[i] += std::norm(buf[i] * scale);
    }
  }
  for (auto& x : mag) x = std::sqrt(x);
  return mag;
}

BlockMagnitudes magnitudes(const LPFilterBank& bank, std::span<const GridField> comps, bool with_low) {
  check_components(comps);
  std::vector<GridField> spectra;
  for (const auto& c : comps) {
    if (!(c.grid() == bank.grid())) throw ArgumentError("field grid does not match the filter bank grid");
    spectra.push_back(to_spectral(c));
  }
  BlockMagnitudes out;
  if (with_low) out.low = magnitude_of_multiplied(spectra, bank.phi0());
  for (int j = 0; j <= bank.j_max(); ++j) out.blocks.push_back(magnitude_of_multiplied(spectra, bank.psi(j)));
  return out;
}

double tl_from_blocks(const BlockMagnitudes& bm, const NormSpec& spec, double weight) {
  const std::size_t n = bm.blocks.front().size();
  std::vector<double> agg(n, 0.0);
  const bool qinf = std::isinf(spec.q);
  auto accumulate = [&](const std::vector<double>& block, double w) {
    if (qinf) {
      for (std::size_t i = 0; i < n; ++i) agg[i] = std::max(agg[i], w * block[i]);
    } else if (spec.q == 1.0) {
      for (std::size_t i = 0; i < n; ++i) agg[i] += w * block[i];
    } else if (spec.q == 2.0) {
      for (std::size_t i = 0; i < n; ++i) agg[i] += (w * block[i]) * (w * block[i]);
    } else {
      for (std::size_t i = 0; i < n; ++i) agg[i] += std::pow(w * block[i], spec.q);
    }
  };
  if (!spec.homogeneous) accumulate(bm.low, 1.0);
  for (std::size_t j = 0; j < bm.blocks.size(); ++j) accumulate(bm.blocks[j], std::exp2(static_cast<double>(j) * spec.s));
  if (!qinf && spec.q != 1.0) {
    const double inv = 1.0 / spec.q;
    for (auto& x : agg) x = spec.q == 2.0 ? std::sqrt(x) : std::pow(x, inv);
  }
  return lp_of_magnitude(agg, spec.p, weight);
}

double besov_from_blocks(const BlockMagnitudes& bm, const NormSpec& spec, double weight) {
  std::vector<double> terms;
  if (!spec.homogeneous) terms.push_back(lp_of_magnitude(bm.low, spec.p, weight));
  for (std::size_t j = 0; j < bm.blocks.size(); ++j)
    terms.push_back(std::exp2(static_cast<double>(j) * spec.s) * lp_of_magnitude(bm.blocks[j], spec.p, weight));
  return lp_of_magnitude(terms, spec.q, 1.0);
}

std::span<const GridField> as_span(const GridField& f) { return {&f, 1}; }

}  // namespace

double lp_norm(const GridField& f, double p) { return lp_norm(as_span(f), p); }

double lp_norm(std::span<const GridField> components, double p) {
  check_components(components);
  if (!(p >= 1.0)) throw ArgumentError("L^p norm needs p >= 1");
  const auto mag = pointwise_magnitude(components);
  return lp_of_magnitude(mag, p, components.front().grid().cell_volume());
}

double lp_norm(const VectorField& u, double p) { return lp_norm(std::span<const GridField>(u.components), p); }

BlockMagnitudes block_magnitudes(const LPFilterBank& bank, std::span<const GridField> components) {
  return magnitudes(bank, components, true);
}

double tl_norm(const LPFilterBank& bank, std::span<const GridField> components, const NormSpec& spec) {
  spec.validate();
  if (spec.flavor != Flavor::triebel_lizorkin) throw ArgumentError("tl_norm called with a Besov spec");
  const auto bm = magnitudes(bank, components, !spec.homogeneous);
  return tl_from_blocks(bm, spec, bank.grid().cell_volume());
}

double tl_norm(const LPFilterBank& bank, const GridField& f, const NormSpec& spec) {
  return tl_norm(bank, as_span(f), spec);
}

double tl_norm(const LPFilterBank& bank, const VectorField& u, const NormSpec& spec) {
  return tl_norm(bank, std::span<const GridField>(u.components), spec);
}

double besov_norm(const LPFilterBank& bank, std::span<const GridField> components, const NormSpec& spec) {
  spec.validate();
  if (spec.flavor != Flavor::besov) throw ArgumentError("besov_norm called with a Triebel-Lizorkin spec");
  const auto bm = magnitudes(bank, components, !spec.homogeneous);
  return besov_from_blocks(bm, spec, bank.grid().cell_volume());
}

double besov_norm(const LPFilterBank& bank, const GridField& f, const NormSpec& spec) {
  return besov_norm(bank, as_span(f), spec);
}

double besov_norm(const LPFilterBank& bank, const VectorField& u, const NormSpec& spec) {
  return besov_norm(bank, std::span<const GridField>(u.components), spec);
}

double norm(const LPFilterBank& bank, std::span<const GridField> components, const NormSpec& spec) {
  return spec.flavor == Flavor::triebel_lizorkin ? tl_norm(bank, components, spec) : besov_norm(bank, components, spec);
}

double norm(const LPFilterBank& bank, const GridField& f, const NormSpec& spec) { return norm(bank, as_span(f), spec); }

double norm(const LPFilterBank& bank, const VectorField& u, const NormSpec& spec) {
  return norm(bank, std::span<const GridField>(u.components), spec);
}

RatioPair verify_equivalence(const LPFilterBank& bank, const GridField& f, double s, double p, double q) {
  if (!(s > 0.0)) throw ArgumentError("norm equivalence needs s > 0");
  const double full = tl_norm(bank, f, NormSpec::tl(s, p, q));
  const double split = lp_norm(f, p) + tl_norm(bank, f, NormSpec::tl(s, p, q, true));
  if (full == 0.0 || split == 0.0) throw DegenerateInputError("zero field in verify_equivalence");
  return {full / split, split / full};
}

double verify_embedding(const LPFilterBank& bank, const GridField& f, double s0, double p0, double q0, double s1,
                        double p1) {
  const double d = bank.grid().dim();
  if (!(p0 < p1)) throw ArgumentError("embedding needs p0 < p1");
  if (std::abs((s0 - d / p0) - (s1 - d / p1)) > 1e-12)
    throw ArgumentError("embedding needs s0 - d/p0 == s1 - d/p1");
  const double source = tl_norm(bank, f, NormSpec::tl(s0, p0, q0, true));
  if (source == 0.0) throw DegenerateInputError("zero homogeneous norm in verify_embedding");
  return besov_norm(bank, f, NormSpec::besov(s1, p1, p0, true)) / source;
}

GridField fractional_derivative(const GridField& f, int k) {
  const auto& kv = wavevectors(f.grid());
  std::vector<double> mult(f.grid().size());
  for (std::size_t i = 0; i < mult.size(); ++i) mult[i] = std::pow(std::sqrt(squared_magnitude(kv[i])), k);
  return apply_multiplier(f, mult);
}

RatioPair verify_lifting(const LPFilterBank& bank, const GridField& f, double s, double p, double q, int k) {
  if (k != 1 && k != 2) throw ArgumentError("lifting order k must be 1 or 2");
  const GridField spec = to_spectral(f);
  double amp = 0.0;
  for (const auto& x : spec.values()) amp = std::max(amp, std::abs(x));
  if (amp == 0.0) throw DegenerateInputError("zero field in verify_lifting");
  if (std::abs(spec[0]) > 1e-12 * amp) throw ArgumentError("homogeneous lifting needs a zero-mean field");
  const double lhs = tl_norm(bank, spec, NormSpec::tl(s + k, p, q, true));
  const double rhs = tl_norm(bank, fractional_derivative(spec, k), NormSpec::tl(s, p, q, true));
  return {lhs / rhs, rhs / lhs};
}

KernelL1Result kernel_l1_bound(const CutoffProfile& profile, int d, int l, int k, int i, int refinement) {
  if (d != 2 && d != 3) throw ArgumentError("kernel_l1_bound supports d = 2 or 3");
  for (int axis : {l, k, i})
    if (axis < 1 || axis > d) throw ArgumentError("kernel axes must lie in [1, d]");
  const double box = std::ldexp(1.0, refinement);
  // The frequency step 2*pi/box must put at least 16 samples across the
  // unit-width inner ramp of psi; coarser boxes also truncate the kernel tail.
  if (box < 32.0 * std::numbers::pi)
    throw ResolutionError("auxiliary box 2^" + std::to_string(refinement) + " too small to resolve the psi annulus");
  const int max_refinement = d == 2 ? 10 : 8;
  if (refinement > max_refinement) throw ArgumentError("refinement too large for the auxiliary grid");

  const int samples_per_unit = d == 2 ? 4 : 2;
  const int n = static_cast<int>(box) * samples_per_unit;
  const Grid aux(d, n);
  const double dxi = 2.0 * std::numbers::pi / box;
  const double dx = box / n;
  const auto& kv = wavevectors(aux);
  const double norm_factor = std::pow(box, -d);
  const double cell = std::pow(dx, d);

  auto phi = [&](double r) { return profile(r); };
  KernelL1Result out;
  std::vector<cplx> buf(aux.size());
  for (int j = 0;; --j) {
    const double scale = std::ldexp(1.0, j);
    for (std::size_t idx = 0; idx < buf.size(); ++idx) {
      const auto& kk = kv[idx];
      const double xi[3] = {kk[0] * dxi, kk[1] * dxi, kk[2] * dxi};
      const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
      if (r2 == 0.0) {
        buf[idx] = 0.0;
        continue;
      }
      const double r = std::sqrt(r2);
      const double psi = phi(r / 2.0) - phi(r);
      const double symbol = phi(scale * r) * xi[l - 1] * xi[k - 1] / r2;
      buf[idx] = symbol * psi * xi[i - 1];
    }
    fft_inplace(aux, buf, +1);
    double l1 = 0.0;
    for (const auto& v : buf) l1 += std::abs(v);
    const double term = scale * l1 * norm_factor * cell;
    out.levels.push_back(j);
    out.terms.push_back(term);
    out.value += term;
    // For j <= -2 the symbol is constant on supp psi, so the terms halve and
    // the omitted tail equals the last term.
    if (j <= -2 && term < 1e-6) {
      out.tail_bound = term;
      break;
    }
    if (j < -200) throw Error("kernel_l1_bound: dyadic sum failed to converge");
  }
  return out;
}

double RatioReport::max() const {
  double m = 0.0;
  for (double r : ratios) m = std::max(m, r);
  return m;
}

double RatioReport::min() const {
  if (ratios.empty()) return 0.0;
  return *std::min_element(ratios.begin(), ratios.end());
}

double RatioReport::median() const {
  if (ratios.empty()) return 0.0;
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  return sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
}

}  // namespace lpflow
