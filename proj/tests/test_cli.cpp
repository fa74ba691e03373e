#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "lpflow/cli.hpp"
#include "lpflow/field_io.hpp"
#include "lpflow/norms.hpp"
#include "lpflow/random_field.hpp"
#include "lpflow/spectral.hpp"

using namespace lpflow;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lpflow_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("verify moser prints a JSON report and succeeds") {
  const auto r = cli({"verify", "moser", "--n", "64", "--dim", "2", "--s", "3", "--p", "1", "--q", "1", "--seed", "7"});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["estimate_id"] == "moser_product_s3_p1_q1_d2_n64");
  CHECK(j["seed"] == 7);
  CHECK(j["ratios"].size() == 50);
  CHECK(j["calibrated"] == true);
  CHECK(j["passed"] == true);
}

TEST_CASE("suite aliases") {
  const auto r = cli({"verify", "commutator", "--samples", "3"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["suite"] == "commutator-endpoint");
  const auto m = cli({"verify", "maximal", "--samples", "2"});
  CHECK(m.code == 0);
  CHECK(json::parse(m.out)["sublinearity_monotonicity_violations"] == 0);
}

TEST_CASE("usage errors exit with 2") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"bogus"}, {}, {"verify", "nope"}, {"solve", "--n", "33"}, {"norm"}, {"solve", "--T", "abc"}}) {
    const auto r = cli(args);
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
  }
  const auto dir = scratch("badconfig");
  write_text(dir / "bad.json", R"({"grid": {"m": 3}})");
  CHECK(cli({"solve", "--config", (dir / "bad.json").string()}).code == 2);
  write_text(dir / "broken.json", "{");
  CHECK(cli({"solve", "--config", (dir / "broken.json").string()}).code == 2);
}

TEST_CASE("help exits cleanly") {
  const auto r = cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verify") != std::string::npos);
}

TEST_CASE("solve with a Taylor-Green config writes a trajectory manifest") {
  const auto dir = scratch("solve");
  write_text(dir / "tg.json",
             R"({"grid": {"n": 32, "dim": 2}, "solver": {"T": 0.05, "dt": 1e-3, "record_every": 10},
                 "experiment": {"kind": "solve", "data": "taylor_green"}})");
  const auto r = cli({"solve", "--config", (dir / "tg.json").string(), "--out", (dir / "run").string()});
  REQUIRE(r.code == 0);
  const auto summary = json::parse(r.out);
  CHECK(summary["steps"] == 50);
  CHECK(summary["energy_drift"].get<double>() <= 1e-12);
  std::ifstream is(dir / "run" / "manifest.json");
  const auto manifest = json::parse(is);
  CHECK(manifest["files"].size() == 6);
  CHECK(fs::exists(dir / "run" / manifest["files"][0].get<std::string>()));
}

TEST_CASE("flags override config values") {
  const auto dir = scratch("override");
  write_text(dir / "c.json", R"({"grid": {"n": 32}, "solver": {"T": 0.05}, "experiment": {"data": "taylor_green"}})");
  const auto r = cli({"solve", "--config", (dir / "c.json").string(), "--T", "0.02"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["steps"] == 20);
}

TEST_CASE("norm and decompose agree with the library") {
  const auto dir = scratch("fields");
  const Grid g(2, 32);
  const LPFilterBank bank(g);
  const GridField f = random_scalar(g, {1.0, 1.0, 12.0, 3});
  write_field(f, dir / "f.lpf");

  const auto r = cli({"norm", (dir / "f.lpf").string(), "--s", "2", "--p", "2", "--q", "2"});
  REQUIRE(r.code == 0);
  const double expected = tl_norm(bank, f, NormSpec::tl(2, 2, 2));
  CHECK(json::parse(r.out)["value"].get<double>() == doctest::Approx(expected).epsilon(1e-14));

  const auto d = cli({"decompose", (dir / "f.lpf").string(), "--out", (dir / "dec").string()});
  REQUIRE(d.code == 0);
  const auto rep = json::parse(d.out);
  GridField sum = to_spectral(read_scalar_field(dir / "dec" / "fields" / "low.lpf"));
  for (std::size_t b = 1; b < rep["blocks"].size(); ++b)
    sum = sum + read_scalar_field(dir / "dec" / rep["blocks"][b]["file"].get<std::string>());
  CHECK(lp_norm(sum - f, 2.0) <= 1e-12 * lp_norm(f, 2.0));
}

TEST_CASE("experiment subcommands are deterministic") {
  const std::vector<std::string> args{"bona-smith", "--n", "32", "--T", "0.02", "--N", "2", "3", "--seed", "4"};
  const auto a = cli(args), b = cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("a bracket failure exits with 1") {
  const auto dir = scratch("calibration");
  write_text(dir / "tight.json", R"({"entries": {"moser_product_s3_p1_q1_d2_n64": {"max": 1e-6, "min": 0}}})");
  ::setenv("LPFLOW_CALIBRATION", (dir / "tight.json").c_str(), 1);
  const auto r = cli({"verify", "moser", "--samples", "3"});
  ::unsetenv("LPFLOW_CALIBRATION");
  CHECK(r.code == 1);
  CHECK(json::parse(r.out)["passed"] == false);
}

TEST_CASE("the installed binary reports usage errors") {
  const std::string cmd = std::string(LPFLOW_CLI_PATH) + " bogus 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 2);
}
