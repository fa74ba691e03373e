#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lpflow/cli.hpp"
#include "lpflow/errors.hpp"
#include "lpflow/experiments.hpp"
#include "lpflow/iteration.hpp"
#include "lpflow/paraproduct.hpp"
#include "lpflow/random_field.hpp"
#include "lpflow/spectral.hpp"
#include "lpflow/suites.hpp"

namespace py = pybind11;
using namespace lpflow;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Grid grid_of(const Array& a, int leading) {
  const int d = static_cast<int>(a.ndim()) - leading;
  if (d < 2 || d > 3) throw ArgumentError("expected a 2D or 3D sample array");
  const auto n = a.shape(leading);
  for (int i = leading; i < a.ndim(); ++i)
    if (a.shape(i) != n) throw ArgumentError("sample arrays must be square (n points per axis)");
  return Grid(d, static_cast<int>(n));
}

GridField scalar_from(const Array& a) {
  const Grid g = grid_of(a, 0);
  return GridField::from_real(g, {a.data(), g.size()});
}

/// Arrays of shape (d, n, ..., n) become vector fields.
VectorField vector_from(const Array& a) {
  const Grid g = grid_of(a, 1);
  if (a.shape(0) != g.dim()) throw ArgumentError("leading axis must hold the d components");
  std::vector<GridField> comps;
  for (int c = 0; c < g.dim(); ++c) comps.push_back(GridField::from_real(g, {a.data() + c * g.size(), g.size()}));
  VectorField u(std::move(comps), false);
  u.div_free = is_div_free(u);
  return u;
}

std::vector<py::ssize_t> shape_of(const Grid& g, int components) {
  std::vector<py::ssize_t> shape;
  if (components > 0) shape.push_back(components);
  for (int i = 0; i < g.dim(); ++i) shape.push_back(g.n());
  return shape;
}

Array to_array(const GridField& f) {
  const GridField p = to_physical(f);
  Array out(shape_of(p.grid(), 0));
  double* dst = out.mutable_data();
  for (std::size_t i = 0; i < p.size(); ++i) dst[i] = p[i].real();
  return out;
}

Array to_array(const VectorField& u) {
  const Grid& g = u.grid();
  Array out(shape_of(g, u.dim()));
  double* dst = out.mutable_data();
  for (int c = 0; c < u.dim(); ++c) {
    const GridField p = to_physical(u[c]);
    for (std::size_t i = 0; i < p.size(); ++i) dst[c * g.size() + i] = p[i].real();
  }
  return out;
}

py::object from_json(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

NormSpec make_spec(double s, double p, double q, bool besov, bool homogeneous) {
  return besov ? NormSpec::besov(s, p, q, homogeneous) : NormSpec::tl(s, p, q, homogeneous);
}

DependenceConfig make_config(double s, double p, double q, double T, double dt, std::vector<int> N_list,
                             std::vector<double> eps_list, std::uint64_t seed) {
  DependenceConfig cfg;
  cfg.norm_spec = NormSpec::tl(s, p, q);
  cfg.solver.T = T;
  cfg.solver.dt = dt;
  cfg.N_list = std::move(N_list);
  cfg.eps_list = std::move(eps_list);
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_lpflow, m) {
  m.doc() = "Littlewood-Paley norms, inequality suites and Euler experiments on the periodic box";

  auto base = py::register_exception<Error>(m, "LpflowError", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<DegenerateInputError>(m, "DegenerateInputError", base.ptr());
  py::register_exception<StabilityError>(m, "StabilityError", base.ptr());

  m.def(
      "norm",
      [](const Array& a, double s, double p, double q, bool besov, bool homogeneous, bool vector) {
        const NormSpec spec = make_spec(s, p, q, besov, homogeneous);
        if (vector) {
          const VectorField u = vector_from(a);
          return norm(LPFilterBank(u.grid()), u, spec);
        }
        const GridField f = scalar_from(a);
        return norm(LPFilterBank(f.grid()), f, spec);
      },
      py::arg("samples"), py::arg("s"), py::arg("p"), py::arg("q"), py::arg("besov") = false,
      py::arg("homogeneous") = false, py::arg("vector") = false);

  m.def(
      "decompose",
      [](const Array& a) {
        const GridField f = scalar_from(a);
        const auto dec = decompose(LPFilterBank(f.grid()), f);
        std::vector<Array> out{to_array(dec.low)};
        for (const auto& b : dec.blocks) out.push_back(to_array(b));
        return out;
      },
      py::arg("samples"), "P_{<=0} f followed by the dyadic blocks, as physical samples");

  m.def(
      "p_le",
      [](const Array& a, int level) {
        const GridField f = scalar_from(a);
        return to_array(p_le(LPFilterBank(f.grid()), f, level));
      },
      py::arg("samples"), py::arg("level"));

  m.def(
      "taylor_green", [](int n, int dim) { return to_array(taylor_green(Grid(dim, n))); }, py::arg("n") = 64,
      py::arg("dim") = 2);
  m.def(
      "broadband_data",
      [](int n, int dim, double decay, std::uint64_t seed) { return to_array(broadband_data(Grid(dim, n), decay, seed)); },
      py::arg("n") = 64, py::arg("dim") = 2, py::arg("decay") = 6.0, py::arg("seed") = 0);

  m.def(
      "solve",
      [](const Array& u0, double T, double dt) {
        SolverConfig cfg;
        cfg.T = T;
        cfg.dt = dt;
        const VectorField u = vector_from(u0);
        if (!u.div_free) throw ArgumentError("initial data must be divergence free");
        return to_array(solve_state(u, cfg));
      },
      py::arg("u0"), py::arg("T"), py::arg("dt") = 1e-3, "final state of the Euler equations");

  m.def(
      "suite_names", [] { return suite_names(); }, "names accepted by run_suite");
  m.def(
      "run_suite",
      [](const std::string& name, int n, int dim, std::uint64_t seed, int samples, std::optional<double> s,
         std::optional<double> p, std::optional<double> q) {
        SuiteOptions o;
        o.n = n;
        o.dim = dim;
        o.seed = seed;
        o.samples = samples;
        o.s = s;
        o.p = p;
        o.q = q;
        const RatioReport r = run_suite(name, o);
        const BracketCheck b = check_bracket(r, Calibration::load_default(), suite_is_two_sided(name));
        nlohmann::json j = to_json(r);
        j["calibrated"] = b.calibrated;
        j["passed"] = !b.calibrated || b.passed;
        j["bracket"] = b.message;
        return from_json(j);
      },
      py::arg("name"), py::arg("n") = 64, py::arg("dim") = 2, py::arg("seed") = 0, py::arg("samples") = 0,
      py::arg("s") = py::none(), py::arg("p") = py::none(), py::arg("q") = py::none());

  m.def(
      "iterate",
      [](const Array& u0, int M, double T, double dt, double s, double p, double q) {
        const VectorField u = vector_from(u0);
        SolverConfig cfg;
        cfg.T = T;
        cfg.dt = dt;
        cfg.record_every = 10;
        return from_json(cauchy_report(iterate(LPFilterBank(u.grid()), u, M, cfg, NormSpec::tl(s, p, q))).to_json());
      },
      py::arg("u0"), py::arg("M") = 6, py::arg("T") = 0.1, py::arg("dt") = 1e-3, py::arg("s") = 3.0,
      py::arg("p") = 1.0, py::arg("q") = 1.0);

  const auto experiment = [&m](const char* name, auto fn) {
    m.def(
        name,
        [fn](const Array& u0, double s, double p, double q, double T, double dt, std::vector<int> N_list,
             std::vector<double> eps_list, std::uint64_t seed) {
          const VectorField u = vector_from(u0);
          const auto cfg = make_config(s, p, q, T, dt, std::move(N_list), std::move(eps_list), seed);
          return from_json(fn(LPFilterBank(u.grid()), u, cfg).to_json());
        },
        py::arg("u0"), py::arg("s") = 3.0, py::arg("p") = 1.0, py::arg("q") = 1.0, py::arg("T") = 0.2,
        py::arg("dt") = 1e-3, py::arg("N_list") = std::vector<int>{3, 4, 5},
        py::arg("eps_list") = std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4}, py::arg("seed") = 0);
  };
  experiment("boundedness",
             [](const LPFilterBank& b, const VectorField& u, const DependenceConfig& c) { return boundedness_experiment(b, u, c); });
  experiment("bona_smith",
             [](const LPFilterBank& b, const VectorField& u, const DependenceConfig& c) { return bona_smith_experiment(b, u, c); });
  experiment("lipschitz", [](const LPFilterBank& b, const VectorField& u, const DependenceConfig& c) {
    return lipschitz_lowernorm_experiment(b, u, c);
  });

  m.def(
      "continuity",
      [](const Array& u0, const Array& psi, double T, std::vector<int> N_list) {
        const VectorField u = vector_from(u0), v = vector_from(psi);
        const auto cfg = make_config(3.0, 1.0, 1.0, T, 1e-3, std::move(N_list), {1e-1}, 0);
        return from_json(continuity_assembly(LPFilterBank(u.grid()), u, v, cfg).to_json());
      },
      py::arg("u0"), py::arg("psi"), py::arg("T") = 0.2, py::arg("N_list") = std::vector<int>{3, 4, 5});

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli_main(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "runs the command-line front end in process; returns (exit code, stdout, stderr)");
}
