#include "lpflow/suites.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>

#include <json.hpp>

#include "lpflow/errors.hpp"
#include "lpflow/filter_bank.hpp"
#include "lpflow/maximal.hpp"
#include "lpflow/paraproduct.hpp"
#include "lpflow/random_field.hpp"
#include "lpflow/spectral.hpp"

#ifndef LPFLOW_CALIBRATION_FILE
#define LPFLOW_CALIBRATION_FILE "data/calibration.json"
#endif

namespace lpflow {

namespace {

std::uint64_t sample_seed(std::uint64_t base, int i, int stream = 0) {
  return base * 1000003ULL + static_cast<std::uint64_t>(i) * 16ULL + static_cast<std::uint64_t>(stream);
}

std::string number(double x) {
  if (std::isinf(x)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

double top_band(const Grid& g, double want) { return std::min(want, g.n() / 2 - 1.0); }

/// Scalar test field for sample i: the decay and band vary along the corpus.
GridField corpus_scalar(const Grid& g, std::uint64_t base, int i, int stream) {
  const double decay = 0.5 + 0.5 * (i % 4);
  const double k_hi = top_band(g, 6.0 + 2.0 * (i % 5));
  return random_scalar(g, {decay, 1.0, k_hi, sample_seed(base, i, stream)});
}

VectorField corpus_vector(const Grid& g, std::uint64_t base, int i, int stream) {
  const double decay = 0.5 + 0.5 * (i % 4);
  const double k_hi = top_band(g, 6.0 + 2.0 * ((i + 2) % 5));
  return random_vector(g, {decay, 1.0, k_hi, sample_seed(base, i, stream)});
}

struct Params {
  double s, p, q;
};

Params params(const SuiteOptions& o, Params def) {
  return {o.s.value_or(def.s), o.p.value_or(def.p), o.q.value_or(def.q)};
}

int count(const SuiteOptions& o, int def) { return o.samples > 0 ? o.samples : def; }

RatioReport start(const std::string& stem, const Params& pr, const SuiteOptions& o, std::vector<NormSpec> specs) {
  RatioReport r;
  r.estimate_id = estimate_id(stem, pr.s, pr.p, pr.q, o.dim, o.n);
  r.specs = std::move(specs);
  r.seed = o.seed;
  return r;
}

std::string label(int i, const std::string& extra = "") {
  return "sample " + std::to_string(i) + (extra.empty() ? "" : ", " + extra);
}

RatioReport equivalence(const SuiteOptions& o) {
  const Grid g(o.dim, o.n);
  const LPFilterBank bank(g);
  const Params pr = params(o, {2.0, 2.0, 2.0});
  auto r = start("equivalence", pr, o, {NormSpec::tl(pr.s, pr.p, pr.q), NormSpec::tl(pr.s, pr.p, pr.q, true)});
  for (int i = 0; i < count(o, 100); ++i) {
    r.ratios.push_back(verify_equivalence(bank, corpus_scalar(g, o.seed, i, 0), pr.s, pr.p, pr.q).ratio);
    r.samples.push_back(label(i));
  }
  return r;
}

RatioReport linf_chain(const SuiteOptions& o) {
  const Grid g(o.dim, o.n);
  const LPFilterBank bank(g);
  const NormSpec b = NormSpec::besov(0.0, kInf, 1.0);
  auto r = start("linf_chain", {0.0, kInf, 1.0}, o, {b});
  for (int i = 0; i < count(o, 100); ++i) {
    const GridField f = corpus_scalar(g, o.seed, i, 0);
    r.ratios.push_back(lp_norm(f, kInf) / besov_norm(bank, f, b));
    r.samples.push_back(label(i));
  }
  return r;
}

RatioReport embedding(const SuiteOptions& o) {
  const Grid g(o.dim, o.n);
  const LPFilterBank bank(g);
  const Params pr = params(o, {3.0, 1.0, 2.0});
  const double p1 = 2.0 * pr.p;
  const double s1 = pr.s - o.dim / pr.p + o.dim / p1;
  auto r = start("embedding", pr, o,
                 {NormSpec::tl(pr.s, pr.p, pr.q, true), NormSpec::besov(s1, p1, pr.p, true)});
  for (int i = 0; i < count(o, 50); ++i) {
    r.ratios.push_back(verify_embedding(bank, corpus_scalar(g, o.seed, i, 0), pr.s, pr.p, pr.q, s1, p1));
    r.samples.push_back(label(i));
  }
  return r;
}

RatioReport lifting(const SuiteOptions& o) {
  const Grid g(o.dim, o.n);
  const LPFilterBank bank(g);
  const Params pr = params(o, {1.0, 2.0, 2.0});
  auto r = start("lifting_k1", pr, o, {NormSpec::tl(pr.s + 1.0, pr.p, pr.q, true), NormSpec::tl(pr.s, pr.p, pr.q, true)});
  for (int i = 0; i < count(o, 50); ++i) {
    r.ratios.push_back(verify_lifting(bank, corpus_scalar(g, o.seed, i, 0), pr.s, pr.p, pr.q, 1).ratio);
    r.samples.push_back(label(i));
  }
  return r;
}

RatioReport maximal_pointwise(const SuiteOptions& o) {
  const Grid g(o.dim, o.n);
  const LPFilterBank bank(g);
  const auto cfg = MaximalConfig::dyadic(g);
  const int j = std::min(5, bank.j_max());
  const double theta = 1.0, rr = 0.5;
  RatioReport r;
  r.estimate_id = "maximal_pointwise_theta1_r0.5_j" + std::to_string(j) + "_d" + std::to_string(o.dim) + "_n" +
                  std::to_string(o.n);
  r.seed = o.seed;
  for (int i = 0; i < count(o, 20); ++i) {
    const GridField f = random_scalar(g, {1.0, 1.0, top_band(g, std::exp2(j)), sample_seed(o.seed, i)});
    for (int gap = 0; gap <= 4 && j - gap >= 0; ++gap) {
      r.ratios.push_back(verify_pointwise_bound(bank, f, j, j - gap, theta, rr, cfg));
      r.samples.push_back(label(i, "j-k=" + std::to_string(gap)));
    }
  }
  return r;
}

RatioReport fefferman_stein(const SuiteOptions& o) {
  const Grid g(o.dim, o.n);
  const LPFilterBank bank(g);
  const auto cfg = MaximalConfig::dyadic(g);
  const Params pr = params(o, {0.0, 2.0, 2.0});
  auto r = start("fefferman_stein", pr, o, {});
  for (int i = 0; i < count(o, 10); ++i) {
    const GridField f = random_scalar(g, {1.0, 1.0, top_band(g, 31.0), sample_seed(o.seed, i)});
    r.ratios.push_back(verify_fefferman_stein(decompose(bank, f).blocks, pr.p, pr.q, cfg));
    r.samples.push_back(label(i, "dyadic blocks"));
  }
  return r;
}

RatioReport moser(const SuiteOptions& o) {
  const Grid g(o.dim, o.n);
  const LPFilterBank bank(g);
  const Params pr = params(o, {3.0, 1.0, 1.0});
  const NormSpec spec = NormSpec::tl(pr.s, pr.p, pr.q, true);
  auto r = start("moser_product", pr, o, {spec});
  for (int i = 0; i < count(o, 50); ++i) {
    r.ratios.push_back(verify_moser(bank, corpus_scalar(g, o.seed, i, 0), corpus_scalar(g, o.seed, i, 1), spec));
    r.samples.push_back(label(i));
  }
  return r;
}

RatioReport moser_transport(const SuiteOptions& o, TransportForm form) {
  const Grid g(o.dim, o.n);
  const LPFilterBank bank(g);
  const Params pr = params(o, {0.0, 1.0, 2.0});
  const NormSpec spec = NormSpec::tl(pr.s, pr.p, pr.q, true);
  auto r = start(form == TransportForm::gradient ? "moser_transport" : "moser_transport_split", pr, o, {spec});
  for (int i = 0; i < count(o, 30); ++i) {
    r.ratios.push_back(
        verify_moser_transport(bank, corpus_vector(g, o.seed, i, 0), corpus_vector(g, o.seed, i, 1), spec, form));
    r.samples.push_back(label(i));
  }
  return r;
}

RatioReport commutator_suite(const SuiteOptions& o, CommutatorForm form) {
  const Grid g(o.dim, o.n);
  const LPFilterBank bank(g);
  const Params pr = params(o, form == CommutatorForm::endpoint ? Params{3.0, 1.0, 1.0} : Params{2.5, 2.0, 2.0});
  const NormSpec spec = NormSpec::tl(pr.s, pr.p, pr.q, true);
  auto r = start(form == CommutatorForm::nonendpoint ? "commutator_nonendpoint" : "commutator_endpoint", pr, o, {spec});
  for (int i = 0; i < count(o, 30); ++i) {
    r.ratios.push_back(verify_commutator_estimate(bank, corpus_vector(g, o.seed, i, 0),
                                                  corpus_scalar(g, o.seed, i, 1), spec, form));
    r.samples.push_back(label(i));
  }
  return r;
}

RatioReport kernel_l1(const SuiteOptions& o) {
  RatioReport r;
  r.estimate_id = "kernel_l1_d" + std::to_string(o.dim);
  r.seed = o.seed;
  const auto profile = CutoffProfile::smooth_step();
  const int refinement = o.dim == 2 ? 7 : 6;
  for (int l = 1; l <= o.dim; ++l)
    for (int k = l; k <= o.dim; ++k)
      for (int i = 1; i <= o.dim; ++i) {
        const auto res = kernel_l1_bound(profile, o.dim, l, k, i, refinement);
        r.ratios.push_back(res.value);
        r.samples.push_back("l=" + std::to_string(l) + ", k=" + std::to_string(k) + ", i=" + std::to_string(i));
      }
  return r;
}

const std::map<std::string, std::function<RatioReport(const SuiteOptions&)>>& registry() {
  static const std::map<std::string, std::function<RatioReport(const SuiteOptions&)>> table = {
      {"equivalence", equivalence},
      {"linf-chain", linf_chain},
      {"embedding", embedding},
      {"lifting", lifting},
      {"maximal-pointwise", maximal_pointwise},
      {"fefferman-stein", fefferman_stein},
      {"moser", moser},
      {"moser-transport", [](const SuiteOptions& o) { return moser_transport(o, TransportForm::gradient); }},
      {"moser-transport-split", [](const SuiteOptions& o) { return moser_transport(o, TransportForm::split); }},
      {"commutator-nonendpoint", [](const SuiteOptions& o) { return commutator_suite(o, CommutatorForm::nonendpoint); }},
      {"commutator-endpoint", [](const SuiteOptions& o) { return commutator_suite(o, CommutatorForm::endpoint); }},
      {"kernel-l1", kernel_l1},
  };
  return table;
}

}  // namespace

std::string estimate_id(const std::string& stem, double s, double p, double q, int d, int n) {
  return stem + "_s" + number(s) + "_p" + number(p) + "_q" + number(q) + "_d" + std::to_string(d) + "_n" +
         std::to_string(n);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "equivalence",           "linf-chain",  "embedding",         "lifting",
      "maximal-pointwise",     "fefferman-stein", "moser",         "moser-transport",
      "moser-transport-split", "commutator-nonendpoint", "commutator-endpoint", "kernel-l1",
  };
  return names;
}

RatioReport run_suite(const std::string& name, const SuiteOptions& opts) {
  const auto& table = registry();
  const auto it = table.find(name);
  if (it == table.end()) throw ArgumentError("unknown suite '" + name + "'");
  if (opts.dim < 2 || opts.dim > 3) throw ArgumentError("dimension must be 2 or 3");
  if (opts.samples < 0) throw ArgumentError("sample count must be nonnegative");
  return it->second(opts);
}

bool suite_is_two_sided(const std::string& name) { return name == "equivalence" || name == "lifting"; }

std::filesystem::path Calibration::default_path() {
  if (const char* env = std::getenv("LPFLOW_CALIBRATION"); env && *env) return env;
  return LPFLOW_CALIBRATION_FILE;
}

Calibration Calibration::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read calibration file " + path.string());
  Calibration cal;
  try {
    const auto j = nlohmann::json::parse(is);
    for (const auto& [id, e] : j.at("entries").items()) {
      CalibrationEntry entry;
      entry.max = e.at("max").get<double>();
      entry.min = e.value("min", 0.0);
      entry.n_samples = e.value("n_samples", std::size_t{0});
      entry.seed = e.value("seed", std::uint64_t{0});
      cal.entries_[id] = entry;
    }
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError("malformed calibration file " + path.string() + ": " + ex.what());
  }
  return cal;
}

Calibration Calibration::load_default() {
  const auto path = default_path();
  if (!std::filesystem::exists(path)) return {};
  return load(path);
}

std::optional<CalibrationEntry> Calibration::find(const std::string& estimate_id) const {
  const auto it = entries_.find(estimate_id);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Calibration::save(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["protocol"] =
      "maxima and minima measured once on the published seed set (seed 0, default corpus sizes); "
      "later runs must stay within a factor 2 of these brackets";
  j["entries"] = nlohmann::json::object();
  for (const auto& [id, e] : entries_)
    j["entries"][id] = {{"max", e.max}, {"min", e.min}, {"n_samples", e.n_samples}, {"seed", e.seed}};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot write calibration file " + path.string());
  os << j.dump(2) << '\n';
}

BracketCheck check_bracket(const RatioReport& report, const Calibration& cal, bool two_sided) {
  BracketCheck out;
  const auto entry = cal.find(report.estimate_id);
  if (!entry) {
    out.message = "no calibration entry for " + report.estimate_id;
    return out;
  }
  out.calibrated = true;
  out.bound = 2.0 * entry->max;
  const bool upper = report.max() <= out.bound;
  const bool lower = !two_sided || report.min() >= 0.5 * entry->min;
  out.passed = upper && lower;
  char buf[256];
  std::snprintf(buf, sizeof buf, "max %.6g vs bound %.6g (calibration max %.6g)", report.max(), out.bound, entry->max);
  out.message = buf;
  if (two_sided) {
    std::snprintf(buf, sizeof buf, "; min %.6g vs bound %.6g", report.min(), 0.5 * entry->min);
    out.message += buf;
  }
  return out;
}

std::size_t maximal_property_violations(const SuiteOptions& opts) {
  const Grid g(opts.dim, opts.n);
  std::size_t violations = 0;
  for (auto window : {Window::cube, Window::ball}) {
    const auto cfg = MaximalConfig::dyadic(g, window);
    for (int i = 0; i < count(opts, 10); ++i) {
      const GridField f = to_physical(corpus_scalar(g, opts.seed, i, 0));
      const GridField h = to_physical(corpus_scalar(g, opts.seed, i, 1));
      std::vector<double> a(g.size()), b(g.size()), sum(g.size()), dom(g.size());
      for (std::size_t x = 0; x < g.size(); ++x) {
        a[x] = f[x].real();
        b[x] = h[x].real();
        sum[x] = a[x] + b[x];
        dom[x] = std::abs(a[x]) + std::abs(b[x]);
      }
      const auto ma = hl_maximal(g, a, cfg), mb = hl_maximal(g, b, cfg), ms = hl_maximal(g, sum, cfg),
                 md = hl_maximal(g, dom, cfg);
      for (std::size_t x = 0; x < g.size(); ++x) {
        const double tol = 1e-12 * (ma[x] + mb[x]);
        if (ms[x] > ma[x] + mb[x] + tol) ++violations;
        if (ma[x] > md[x] + tol) ++violations;
      }
    }
  }
  return violations;
}

}  // namespace lpflow
