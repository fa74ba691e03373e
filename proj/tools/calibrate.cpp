// Measures every suite on the published seed set and stores the brackets.
#include <cstdio>
#include <exception>
#include <string>

#include "lpflow/suites.hpp"

int main(int argc, char** argv) {
  using namespace lpflow;
  const std::filesystem::path path = argc > 1 ? std::filesystem::path(argv[1]) : Calibration::default_path();
  try {
    Calibration cal;
    SuiteOptions opts;  // seed 0, d = 2, n = 64, default corpus sizes
    for (const auto& name : suite_names()) {
      const RatioReport r = run_suite(name, opts);
      cal.set(r.estimate_id, {r.max(), r.min(), r.ratios.size(), opts.seed});
      std::printf("%-18s %-44s min %.6g max %.6g (%zu samples)\n", name.c_str(), r.estimate_id.c_str(), r.min(),
                  r.max(), r.ratios.size());
    }
    // The non-endpoint commutator estimate is also tracked at the endpoint parameters.
    SuiteOptions endpoint = opts;
    endpoint.s = 3.0;
    endpoint.p = 1.0;
    endpoint.q = 1.0;
    const RatioReport r = run_suite("commutator-nonendpoint", endpoint);
    cal.set(r.estimate_id, {r.max(), r.min(), r.ratios.size(), opts.seed});
    std::printf("%-18s %-44s min %.6g max %.6g (%zu samples)\n", "commutator-nonendpoint", r.estimate_id.c_str(), r.min(),
                r.max(), r.ratios.size());
    cal.save(path);
    std::printf("wrote %zu entries to %s\n", cal.size(), path.string().c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "calibrate: %s\n", e.what());
    return 1;
  }
  return 0;
}
