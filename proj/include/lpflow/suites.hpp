#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lpflow/norms.hpp"

namespace lpflow {

/// Fixed-seed verification corpora. Every suite is a deterministic function
/// of its options; sample i draws its fields from seeds derived from
/// (seed, i).
struct SuiteOptions {
  int n = 64;
  int dim = 2;
  std::uint64_t seed = 0;
  int samples = 0;  // 0: the suite's default corpus size
  // Norm parameters; unset values take the suite's defaults.
  std::optional<double> s, p, q;
};

/// Names accepted by run_suite, in a stable order.
const std::vector<std::string>& suite_names();

/// Runs one named suite. Names: equivalence, linf-chain, embedding, lifting,
/// maximal-pointwise, fefferman-stein, moser, moser-transport, moser-transport-split,
/// commutator-nonendpoint, commutator-endpoint, kernel-l1.
RatioReport run_suite(const std::string& name, const SuiteOptions& opts);

/// Stored bracket of a corpus: the extreme ratios seen at calibration time.
struct CalibrationEntry {
  double max = 0.0;
  double min = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

class Calibration {
 public:
  Calibration() = default;
  /// Reads {"entries": {id: {max, min, n_samples, seed}}}.
  static Calibration load(const std::filesystem::path& path);
  /// The file named by LPFLOW_CALIBRATION, else the compiled-in default.
  static Calibration load_default();
  static std::filesystem::path default_path();

  std::optional<CalibrationEntry> find(const std::string& estimate_id) const;
  void set(const std::string& estimate_id, const CalibrationEntry& e) { entries_[estimate_id] = e; }
  void save(const std::filesystem::path& path) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::string, CalibrationEntry> entries_;
};

/// Outcome of checking a report against its stored bracket with factor 2:
/// max <= 2 * cal.max, and, for two-sided suites, min >= cal.min / 2.
struct BracketCheck {
  bool calibrated = false;  // an entry exists for the id
  bool passed = false;
  double bound = 0.0;       // 2 * calibration max
  std::string message;
};

BracketCheck check_bracket(const RatioReport& report, const Calibration& cal, bool two_sided = false);

/// Whether the suite's calibration bracket is checked on both sides.
bool suite_is_two_sided(const std::string& name);

/// Calibration-style id such as "moser_product_s3_p1_q1_d2_n64".
std::string estimate_id(const std::string& stem, double s, double p, double q, int d, int n);

/// Counts violations of M(f+g) <= Mf + Mg and of |f| <= |g| => Mf <= Mg over
/// a corpus of random pairs, both windows. Zero is expected.
std::size_t maximal_property_violations(const SuiteOptions& opts);

}  // namespace lpflow
