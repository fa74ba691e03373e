#include "lpflow/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "lpflow/errors.hpp"
#include "lpflow/experiments.hpp"
#include "lpflow/field_io.hpp"
#include "lpflow/iteration.hpp"
#include "lpflow/paraproduct.hpp"
#include "lpflow/random_field.hpp"
#include "lpflow/spectral.hpp"
#include "lpflow/suites.hpp"

namespace lpflow {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Raised for bad flags or config content; maps to exit code 2.
struct UsageError : Error {
  using Error::Error;
};

struct Settings {
  int n = 64;
  int dim = 2;
  std::optional<double> s, p, q;
  bool homogeneous = false;
  bool besov = false;
  double T = 0.2;
  double dt = 1e-3;
  bool dealias = true;
  int record_every = 10;
  std::uint64_t seed = 0;
  std::vector<int> N_list{3, 4, 5};
  std::vector<double> eps_list{1e-1, 1e-2, 1e-3, 1e-4};
  std::string data = "broadband";
  double decay = 6.0;
  int M = 6;
  int samples = 0;
  std::string family = "lacunary";
  std::vector<int> scales{1, 2, 3, 4, 5};
  std::string input, psi_input, config;
  std::optional<std::string> out;

  NormSpec spec() const {
    const double ss = s.value_or(3.0), pp = p.value_or(1.0), qq = q.value_or(1.0);
    return besov ? NormSpec::besov(ss, pp, qq, homogeneous) : NormSpec::tl(ss, pp, qq, homogeneous);
  }
  SolverConfig solver() const {
    SolverConfig c;
    c.T = T;
    c.dt = dt;
    c.dealias = dealias;
    c.record_every = record_every;
    return c;
  }
  DependenceConfig dependence() const {
    DependenceConfig c;
    c.norm_spec = spec();
    c.N_list = N_list;
    c.eps_list = eps_list;
    c.solver = solver();
    c.seed = seed;
    return c;
  }
};

void check_keys(const json& obj, const char* section, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw UsageError(std::string("config section '") + section + "' must be an object");
  for (const auto& [key, _] : obj.items())
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw UsageError(std::string("unknown config key '") + section + "." + key + "'");
}

/// Config values become the new defaults; explicit flags are applied later.
void apply_config(const fs::path& path, Settings& st) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw UsageError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  check_keys(j, "<root>", {"grid", "norm", "solver", "experiment"});
  try {
    if (j.contains("grid")) {
      const auto& g = j["grid"];
      check_keys(g, "grid", {"n", "dim"});
      st.n = g.value("n", st.n);
      st.dim = g.value("dim", st.dim);
    }
    if (j.contains("norm")) {
      const auto& nm = j["norm"];
      check_keys(nm, "norm", {"s", "p", "q", "homogeneous", "flavor"});
      if (nm.contains("s")) st.s = nm["s"].get<double>();
      if (nm.contains("p")) st.p = nm["p"].get<double>();
      if (nm.contains("q")) st.q = nm["q"].get<double>();
      st.homogeneous = nm.value("homogeneous", st.homogeneous);
      if (nm.contains("flavor")) {
        const auto fl = nm["flavor"].get<std::string>();
        if (fl != "besov" && fl != "triebel-lizorkin") throw UsageError("norm.flavor must be besov or triebel-lizorkin");
        st.besov = fl == "besov";
      }
    }
    if (j.contains("solver")) {
      const auto& sv = j["solver"];
      check_keys(sv, "solver", {"T", "dt", "dealias", "record_every"});
      st.T = sv.value("T", st.T);
      st.dt = sv.value("dt", st.dt);
      st.dealias = sv.value("dealias", st.dealias);
      st.record_every = sv.value("record_every", st.record_every);
    }
    if (j.contains("experiment")) {
      const auto& ex = j["experiment"];
      check_keys(ex, "experiment", {"kind", "N_list", "eps_list", "seed", "data", "decay", "M", "samples"});
      st.N_list = ex.value("N_list", st.N_list);
      st.eps_list = ex.value("eps_list", st.eps_list);
      st.seed = ex.value("seed", st.seed);
      st.data = ex.value("data", st.data);
      st.decay = ex.value("decay", st.decay);
      st.M = ex.value("M", st.M);
      st.samples = ex.value("samples", st.samples);
    }
  } catch (const json::exception& e) {
    throw UsageError("bad value in config file " + path.string() + ": " + e.what());
  }
}

VectorField load_vector(const std::string& path) {
  VectorField u = read_vector_field(path);
  u.div_free = is_div_free(u);
  return u;
}

VectorField initial_data(const Settings& st, const Grid& grid) {
  if (!st.input.empty()) {
    VectorField u = load_vector(st.input);
    if (!(u.grid() == grid)) throw UsageError("input field grid does not match --n/--dim");
    if (!u.div_free) throw UsageError("input field " + st.input + " is not divergence free");
    return u;
  }
  if (st.data == "taylor_green" || st.data == "taylor-green") return taylor_green(grid);
  if (st.data == "broadband") return broadband_data(grid, st.decay, st.seed);
  throw UsageError("unknown initial data '" + st.data + "' (taylor_green or broadband)");
}

/// Grid implied by --input when given, else by --n/--dim.
Grid working_grid(const Settings& st) {
  if (!st.input.empty()) {
    const StoredField f = read_field(st.input);
    return std::visit([](const auto& x) { return Grid(x.grid()); }, f);
  }
  return Grid(st.dim, st.n);
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

int cmd_norm(const Settings& st, std::ostream& out) {
  if (st.input.empty()) throw UsageError("norm needs a field file");
  const StoredField f = read_field(st.input);
  const NormSpec spec = st.spec();
  spec.validate();
  const double value = std::visit(
      [&](const auto& x) {
        const LPFilterBank bank(x.grid());
        return norm(bank, x, spec);
      },
      f);
  emit(out, {{"file", st.input}, {"norm", spec.describe()}, {"value", json_number(value)}});
  return 0;
}

int cmd_decompose(const Settings& st, std::ostream& out) {
  if (st.input.empty()) throw UsageError("decompose needs a field file");
  if (!st.out) throw UsageError("decompose needs --out");
  const fs::path dir = *st.out;
  fs::create_directories(dir / "fields");
  const StoredField f = read_field(st.input);
  std::vector<std::vector<GridField>> per_component;  // [component][block], block 0 is P_{<=0}
  const Grid grid = std::visit([](const auto& x) { return Grid(x.grid()); }, f);
  const LPFilterBank bank(grid);
  auto split = [&](const GridField& c) {
    DyadicDecomposition dec = decompose(bank, c);
    std::vector<GridField> all{std::move(dec.low)};
    for (auto& b : dec.blocks) all.push_back(std::move(b));
    per_component.push_back(std::move(all));
  };
  const bool vector = std::holds_alternative<VectorField>(f);
  if (vector)
    for (const auto& c : std::get<VectorField>(f).components) split(c);
  else
    split(std::get<GridField>(f));

  json blocks = json::array();
  for (std::size_t b = 0; b < per_component.front().size(); ++b) {
    const std::string name = b == 0 ? "fields/low.lpf" : "fields/block_" + std::to_string(b - 1) + ".lpf";
    double l2 = 0.0;
    if (vector) {
      std::vector<GridField> comps;
      for (auto& pc : per_component) comps.push_back(pc[b]);
      const VectorField v(std::move(comps), false);
      write_field(v, dir / name);
      l2 = lp_norm(v, 2.0);
    } else {
      write_field(per_component.front()[b], dir / name);
      l2 = lp_norm(per_component.front()[b], 2.0);
    }
    blocks.push_back({{"j", b == 0 ? json("low") : json(static_cast<int>(b) - 1)}, {"file", name}, {"l2", l2}});
  }
  const json rep = {{"input", st.input}, {"j_max", bank.j_max()}, {"blocks", blocks}};
  std::ofstream(dir / "report.json") << rep.dump(2) << '\n';
  emit(out, rep);
  return 0;
}

std::string canonical_suite(const std::string& name) {
  if (name == "commutator") return "commutator-endpoint";
  if (name == "maximal") return "maximal-pointwise";
  return name;
}

int cmd_verify(const Settings& st, const std::string& which, std::ostream& out) {
  if (which == "counterexample-scan") {
    const Grid grid(st.dim, st.n);
    const LPFilterBank bank(grid);
    const NormSpec spec = st.spec();
    const auto rep = counterexample_scan(bank, parse_scan_family(st.family), spec.s, spec.p, spec.q, st.scales, st.seed);
    if (st.out) write_report(rep, *st.out);
    emit(out, rep.to_json());
    return 0;
  }
  const std::string name = canonical_suite(which);
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) throw UsageError("unknown suite '" + which + "'");
  SuiteOptions opts;
  opts.n = st.n;
  opts.dim = st.dim;
  opts.seed = st.seed;
  opts.samples = st.samples;
  opts.s = st.s;
  opts.p = st.p;
  opts.q = st.q;
  const RatioReport rep = run_suite(name, opts);
  const BracketCheck check = check_bracket(rep, Calibration::load_default(), suite_is_two_sided(name));
  json j = to_json(rep);
  j["suite"] = name;
  j["calibrated"] = check.calibrated;
  j["calibration_max"] = check.calibrated ? json_number(check.bound / 2.0) : json(nullptr);
  j["bound"] = check.calibrated ? json_number(check.bound) : json(nullptr);
  j["bracket"] = check.message;
  bool passed = !check.calibrated || check.passed;
  if (name == "maximal-pointwise") {
    const std::size_t v = maximal_property_violations(opts);
    j["sublinearity_monotonicity_violations"] = v;
    passed = passed && v == 0;
  }
  j["passed"] = passed;
  if (st.out) {
    write_report(rep, *st.out);
    std::ofstream(fs::path(*st.out) / "report.json") << j.dump(2) << '\n';
  }
  emit(out, j);
  return passed ? 0 : 1;
}

void save_data(const Settings& st, const VectorField& u0) {
  if (!st.out) return;
  fs::create_directories(fs::path(*st.out) / "fields");
  write_field(u0, fs::path(*st.out) / "fields" / "u0.lpf");
}

int cmd_solve(const Settings& st, std::ostream& out) {
  const Grid grid = working_grid(st);
  const LPFilterBank bank(grid);
  const VectorField u0 = initial_data(st, grid);
  const NormSpec specs[] = {st.spec()};
  const Trajectory tr = solve(u0, st.solver(), specs);
  if (st.out) write_trajectory(tr, *st.out);
  const auto& first = tr.diagnostics.front();
  const auto& last = tr.diagnostics.back();
  json j = {{"T", st.T},
            {"dt", st.solver().step()},
            {"steps", st.solver().steps()},
            {"snapshots", tr.size()},
            {"norm", specs[0].describe()},
            {"initial_norm", json_number(first.norms.front())},
            {"final_norm", json_number(last.norms.front())},
            {"energy_drift", json_number(std::abs(last.energy - first.energy) / first.energy)}};
  if (st.out) j["manifest"] = (fs::path(*st.out) / "manifest.json").string();
  emit(out, j);
  return 0;
}

int cmd_iterate(const Settings& st, std::ostream& out) {
  const Grid grid = working_grid(st);
  const LPFilterBank bank(grid);
  const VectorField u0 = initial_data(st, grid);
  const IterationLadder ladder = iterate(bank, u0, st.M, st.solver(), st.spec());
  const ExperimentReport rep = cauchy_report(ladder);
  if (st.out) {
    write_report(rep, *st.out);
    write_ladder(ladder, *st.out);
    save_data(st, u0);
  }
  emit(out, rep.to_json());
  return 0;
}

int cmd_experiment(const Settings& st, const std::string& which, std::ostream& out) {
  const Grid grid = working_grid(st);
  const LPFilterBank bank(grid);
  const VectorField u0 = initial_data(st, grid);
  const DependenceConfig cfg = st.dependence();
  ExperimentReport rep;
  int code = 0;
  if (which == "bona-smith") {
    rep = bona_smith_experiment(bank, u0, cfg);
  } else if (which == "lipschitz") {
    rep = lipschitz_lowernorm_experiment(bank, u0, cfg);
  } else if (which == "boundedness") {
    rep = boundedness_experiment(bank, u0, cfg);
  } else {
    VectorField psi;
    if (!st.psi_input.empty()) {
      psi = load_vector(st.psi_input);
      if (!psi.div_free) throw UsageError("psi field " + st.psi_input + " is not divergence free");
    } else {
      const double k_hi = std::min(4.0, grid.n() / 2 - 1.0);
      psi = to_spectral(u0) + 1e-3 * to_spectral(random_vector(grid, {0.0, 1.0, k_hi, st.seed + 1000}));
      psi.div_free = true;
    }
    rep = continuity_assembly(bank, u0, psi, cfg);
    if (!rep.extra.at("chain_dominates").get<bool>()) code = 1;
  }
  if (st.out) {
    write_report(rep, *st.out);
    save_data(st, u0);
  }
  emit(out, rep.to_json());
  return code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Littlewood-Paley norms, commutator estimates and Euler experiments on the torus", "lpflow"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings st;
  auto* o_n = app.add_option("--n", st.n, "grid points per axis (power of two)");
  auto* o_dim = app.add_option("--dim", st.dim, "space dimension (2 or 3)");
  double s = 0, p = 0, q = 0, T = 0, dt = 0;
  std::uint64_t seed = 0;
  auto* o_s = app.add_option("--s", s, "smoothness index");
  auto* o_p = app.add_option("--p", p, "integrability index (inf allowed)");
  auto* o_q = app.add_option("--q", q, "summability index (inf allowed)");
  auto* o_T = app.add_option("--T", T, "final time");
  auto* o_dt = app.add_option("--dt", dt, "time step");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  app.add_option("--config", st.config, "JSON config file")->check(CLI::ExistingFile);
  std::string out_dir;
  auto* o_out = app.add_option("--out", out_dir, "output directory");

  auto* norm_cmd = app.add_subcommand("norm", "norm of a field file");
  norm_cmd->add_option("file", st.input, "LPF1 field")->required()->check(CLI::ExistingFile);
  norm_cmd->add_flag("--besov", st.besov, "Besov instead of Triebel-Lizorkin");
  norm_cmd->add_flag("--homogeneous", st.homogeneous, "homogeneous norm");

  auto* dec_cmd = app.add_subcommand("decompose", "write the dyadic blocks of a field file");
  dec_cmd->add_option("file", st.input, "LPF1 field")->required()->check(CLI::ExistingFile);

  std::string suite;
  auto* ver_cmd = app.add_subcommand("verify", "run a named inequality suite against its calibration bracket");
  ver_cmd->add_option("suite", suite, "suite name, or counterexample-scan")->required();
  ver_cmd->add_option("--samples", st.samples, "corpus size (0: suite default)");
  ver_cmd->add_option("--family", st.family, "counterexample family: lacunary, modulated_bump, random");
  ver_cmd->add_option("--scales", st.scales, "counterexample scales N");

  auto add_data = [&](CLI::App* c) {
    c->add_option("--input", st.input, "initial data (LPF1 vector field)")->check(CLI::ExistingFile);
    c->add_option("--data", st.data, "generated initial data: broadband or taylor_green");
    c->add_option("--decay", st.decay, "spectral decay of broadband data");
    c->add_option("--record-every", st.record_every, "snapshot cadence in steps");
  };
  auto* solve_cmd = app.add_subcommand("solve", "integrate the Euler equations and write a trajectory");
  add_data(solve_cmd);
  auto* it_cmd = app.add_subcommand("iterate", "successive-approximation ladder");
  add_data(it_cmd);
  it_cmd->add_option("--M", st.M, "number of ladder members");
  auto* bs_cmd = app.add_subcommand("bona-smith", "mollification ladder experiment");
  add_data(bs_cmd);
  bs_cmd->add_option("--N", st.N_list, "mollification levels");
  auto* li_cmd = app.add_subcommand("lipschitz", "Lipschitz modulus in the lower norm");
  add_data(li_cmd);
  li_cmd->add_option("--eps", st.eps_list, "perturbation sizes, decreasing");
  auto* co_cmd = app.add_subcommand("continuity", "continuity chain against the direct difference");
  add_data(co_cmd);
  co_cmd->add_option("--N", st.N_list, "mollification levels");
  co_cmd->add_option("--psi", st.psi_input, "second data set (LPF1 vector field)")->check(CLI::ExistingFile);
  auto* bd_cmd = app.add_subcommand("boundedness", "norm of the solution relative to the data");
  add_data(bd_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "lpflow: " << e.what() << "\n";
    return 2;
  }

  // Flags given on the command line take precedence over the config file,
  // which in turn overrides the built-in defaults. Subcommand-level values
  // are already stored, so keep them across the config load.
  if (!st.config.empty()) {
    Settings from_file;
    apply_config(st.config, from_file);
    from_file.input = st.input;
    from_file.psi_input = st.psi_input;
    from_file.besov = st.besov || from_file.besov;
    from_file.homogeneous = st.homogeneous || from_file.homogeneous;
    from_file.family = st.family;
    from_file.scales = st.scales;
    auto given = [&](const char* name) {
      for (auto* c : {it_cmd, bs_cmd, li_cmd, co_cmd, solve_cmd, bd_cmd, ver_cmd})
        if (const auto* opt = c->get_option_no_throw(name); opt && opt->count() > 0) return true;
      return false;
    };
    if (given("--M")) from_file.M = st.M;
    if (given("--N")) from_file.N_list = st.N_list;
    if (given("--eps")) from_file.eps_list = st.eps_list;
    if (given("--data")) from_file.data = st.data;
    if (given("--decay")) from_file.decay = st.decay;
    if (given("--record-every")) from_file.record_every = st.record_every;
    if (given("--samples")) from_file.samples = st.samples;
    if (o_n->count()) from_file.n = st.n;
    if (o_dim->count()) from_file.dim = st.dim;
    from_file.config = st.config;
    st = std::move(from_file);
  }
  if (o_s->count()) st.s = s;
  if (o_p->count()) st.p = p;
  if (o_q->count()) st.q = q;
  if (o_T->count()) st.T = T;
  if (o_dt->count()) st.dt = dt;
  if (o_seed->count()) st.seed = seed;
  if (o_out->count()) st.out = out_dir;

  if (norm_cmd->parsed()) return cmd_norm(st, out);
  if (dec_cmd->parsed()) return cmd_decompose(st, out);
  if (ver_cmd->parsed()) return cmd_verify(st, suite, out);
  if (solve_cmd->parsed()) return cmd_solve(st, out);
  if (it_cmd->parsed()) return cmd_iterate(st, out);
  if (bs_cmd->parsed()) return cmd_experiment(st, "bona-smith", out);
  if (li_cmd->parsed()) return cmd_experiment(st, "lipschitz", out);
  if (co_cmd->parsed()) return cmd_experiment(st, "continuity", out);
  return cmd_experiment(st, "boundedness", out);
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(args, out, err);
  } catch (const UsageError& e) {
    err << "lpflow: " << e.what() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    err << "lpflow: invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    err << "lpflow: bad field file: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateInputError& e) {
    err << "lpflow: degenerate input: " << e.what() << "\n";
    return 2;
  } catch (const StabilityError& e) {
    err << "lpflow: CFL guard violated at t = " << e.time();
    if (e.member() >= 0) err << " in ladder member " << e.member();
    err << ": " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "lpflow: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "lpflow: " << e.what() << "\n";
    return 1;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace lpflow
