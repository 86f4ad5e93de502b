#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "odetree/butcher.hpp"
#include "odetree/certification.hpp"
#include "odetree/estimator.hpp"
#include "odetree/progeny.hpp"
#include "odetree/reference_solutions.hpp"

namespace py = pybind11;
using namespace odetree;

namespace {

BuiltinProblem make_problem(const std::string& kind, double x0, int n) {
  if (kind == "monomial") return BuiltinProblem::monomial(n, x0);
  if (kind == "exponential") return BuiltinProblem::exponential(x0);
  if (kind == "x_cos_x") return BuiltinProblem::x_cos_x(x0);
  throw std::invalid_argument("kind must be monomial, exponential or x_cos_x");
}

py::dict estimate_to_dict(const Estimate& e) {
  py::dict d;
  d["mean"] = e.mean;
  d["std_error"] = e.std_error;
  d["n_samples"] = e.n_samples;
  d["n_rejected"] = e.n_rejected;
  d["horizon"] = e.horizon;
  return d;
}

}  // namespace

PYBIND11_MODULE(odetree, m) {
  m.doc() = "Monte Carlo ODE solving over random branching trees with "
            "integrability certification";

  py::class_<LifetimeDensity>(m, "LifetimeDensity")
      .def("pdf", &LifetimeDensity::pdf)
      .def("tail", &LifetimeDensity::tail)
      .def("inf_on_horizon", &LifetimeDensity::inf_on_horizon)
      .def("horizon", &LifetimeDensity::horizon)
      .def("quantile", &LifetimeDensity::quantile);

  m.def("exponential_density", &build_exponential, py::arg("lam"));
  m.def(
      "piecewise_density",
      [](double q, const std::string& variant, double T, double lam,
         double eps) {
        PlateauBound v = variant == "C1" ? PlateauBound::C1 : PlateauBound::C2;
        return build_piecewise(q, v, T, lam, eps).density;
      },
      py::arg("q"), py::arg("variant"), py::arg("T"), py::arg("lam"),
      py::arg("eps"));
  m.def(
      "verify_dominance",
      [](const LifetimeDensity& rho, double lam, int grid) {
        auto r = verify_dominance(rho, lam, grid);
        py::dict d;
        d["pass"] = r.pass;
        d["worst_margin"] = r.worst_margin;
        return d;
      },
      py::arg("density"), py::arg("lam"), py::arg("grid_points") = 1000);

  m.def(
      "solve",
      [](const std::string& kind, double x0, int n_power, double t,
         const LifetimeDensity& rho, long long n_samples, std::uint64_t seed,
         long long node_cap, int workers) {
        BuiltinProblem p = make_problem(kind, x0, n_power);
        DerivativeOracle o = derivative_oracle(p);
        return estimate_to_dict(monte_carlo_solve(o, p.x0, t, rho, n_samples,
                                                  seed, node_cap, workers));
      },
      py::arg("kind"), py::arg("x0"), py::arg("n"), py::arg("t"),
      py::arg("density"), py::arg("n_samples"), py::arg("seed") = 1,
      py::arg("node_cap") = 1000000, py::arg("workers") = 0);

  m.def(
      "certify",
      [](const std::string& kind, double x0, int n_power,
         const LifetimeDensity& rho, double lam, double T, double q,
         double delta, double gamma, int k_max) {
        BuiltinProblem p = make_problem(kind, x0, n_power);
        CertifyParams params{lam, T, q, delta, gamma, k_max};
        Certificate cert = certify(problem_bounds(p, k_max), rho, params);
        py::dict d;
        for (const auto& [k, v] : cert.report()) d[py::str(k)] = v;
        return d;
      },
      py::arg("kind"), py::arg("x0"), py::arg("n"), py::arg("density"),
      py::arg("lam"), py::arg("T"), py::arg("q") = 1.0,
      py::arg("delta") = 1.0, py::arg("gamma") = 2.0, py::arg("k_max") = 64);

  m.def("monomial_solution", &monomial_solution);
  m.def("exponential_solution", &exponential_solution);
  m.def(
      "rk4",
      [](const std::string& kind, double x0, int n_power, double t, int steps) {
        BuiltinProblem p = make_problem(kind, x0, n_power);
        return rk4(p, p.x0, t, steps)[0];
      },
      py::arg("kind"), py::arg("x0"), py::arg("n"), py::arg("t"),
      py::arg("steps") = 10000);
  m.def(
      "butcher_series",
      [](const std::string& kind, double x0, int n_power, double t,
         int max_order) {
        BuiltinProblem p = make_problem(kind, x0, n_power);
        DerivativeOracle o = derivative_oracle(p);
        return butcher_series(o, p.x0, t, max_order)[0];
      },
      py::arg("kind"), py::arg("x0"), py::arg("n"), py::arg("t"),
      py::arg("max_order") = 5);
  m.def("rooted_tree_counts", [](int max_order) {
    RootedTreeCatalog cat = enumerate_trees(max_order);
    std::vector<std::size_t> counts;
    for (int n = 1; n <= max_order; ++n) counts.push_back(cat.order(n).size());
    return counts;
  });

  m.def("yule_progeny_pmf", &yule_progeny_pmf);
  m.def("yule_pgf", &yule_pgf);
  m.def("solve_lambda0", &solve_lambda0);
  m.def("c1_threshold", &c1_threshold);
  m.def("c2_threshold", &c2_threshold);
  m.def("a_priori_bound", &a_priori_bound);
  m.def("existence_interval_monomial", [](int n, double x0, double q) {
    auto iv = existence_interval_monomial(n, x0, q);
    return py::make_tuple(iv.t_max, iv.blow_up);
  });
  m.def("existence_interval_exponential", [](double x0, double q) {
    auto iv = existence_interval_exponential(x0, q);
    return py::make_tuple(iv.t_max, iv.blow_up);
  });
  m.def(
      "marked_progeny_mean",
      [](double lam, double t, int j, const std::function<double(int)>& sigma,
         double gamma, double delta, long long n_samples, std::uint64_t seed) {
        auto r = marked_progeny_mean(lam, t, j, sigma, gamma, delta, n_samples,
                                     seed, 1000000, 0);
        py::dict d;
        d["estimate"] = r.estimate;
        d["std_error"] = r.std_error;
        d["bound"] = r.bound;
        return d;
      },
      py::arg("lam"), py::arg("t"), py::arg("j"), py::arg("sigma"),
      py::arg("gamma"), py::arg("delta"), py::arg("n_samples"),
      py::arg("seed") = 1);
}
