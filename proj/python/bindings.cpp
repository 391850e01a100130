#include "ccrm/diagnostics.hpp"
#include "ccrm/io.hpp"
#include "ccrm/problems.hpp"
#include "ccrm/tables.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ccrm;

namespace {

bool is_file_spec(const std::string& spec) { return spec.size() > 5 && spec.ends_with(".json"); }

template <class R> py::dict solve_impl(const std::string& spec, const std::string& method,
                                       const std::optional<Vector>& z0, double tol, int max_iter) {
  FeasibilityProblem<R> problem;
  std::optional<Vector> start = z0;
  if (is_file_spec(spec)) {
    const Json j = read_json_file(spec);
    problem = problem_from_json<R>(j);
    if (!start) start = start_from_json(j);
  } else {
    CatalogEntry<R> e = resolve_problem<R>(spec);
    problem = std::move(e.problem);
    if (!start) start = to_double(e.z0);
  }
  if (!start) throw InputError("no starting point: pass z0 or add one to the problem file");

  SolverConfig<R> cfg;
  cfg.method = method_from_name(method);
  cfg.max_iter = max_iter;
  if (tol > 0) cfg.tol_feas = R(tol);
  SolveTrace<R> t;
  {
    py::gil_scoped_release release;
    t = run(problem, cfg, from_double<R>(*start));
  }

  Matrix iterates(static_cast<Index>(t.size()), problem.dim());
  for (std::size_t k = 0; k < t.size(); ++k) iterates.row(static_cast<Index>(k)) = to_double(t.iterates[k]).transpose();
  const auto doubles = [](const std::vector<R>& v) {
    std::vector<double> out;
    for (const R& x : v) out.push_back(to_double(x));
    return out;
  };
  py::dict d;
  d["method"] = std::string(method_name(t.method));
  d["termination"] = std::string(termination_name(t.termination));
  d["iterations"] = t.size() - 1;
  d["iterates"] = iterates;
  d["dist_X"] = doubles(t.dist_x);
  d["dist_Y"] = doubles(t.dist_y);
  d["dist_ref"] = doubles(t.dist_ref);
  return d;
}

py::dict rate_dict(const RateReport& r) {
  py::dict d;
  d["classification"] = std::string(rate_name(r.classification));
  d["constant"] = r.constant;
  d["linear_ratios"] = r.linear_ratios;
  d["quadratic_ratios"] = r.quad_ratios;
  d["usable"] = r.usable;
  return d;
}

}  // namespace

PYBIND11_MODULE(_ccrm, m) {
  m.doc() = "Centralized circumcentered-reflection feasibility solver";

  // Translators run newest first: the base class goes in before its subclasses.
  py::register_exception<Error>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_ValueError);

  m.def("catalog_names", &catalog_names);

  m.def(
      "solve",
      [](const std::string& problem, const std::string& method, std::optional<Vector> z0, double tol, int max_iter,
         const std::string& precision) {
        if (precision == "double") return solve_impl<double>(problem, method, z0, tol, max_iter);
        if (precision == "quad") return solve_impl<Quad>(problem, method, z0, tol, max_iter);
        throw InputError("precision must be 'double' or 'quad'");
      },
      py::arg("problem"), py::arg("method") = "ccrm", py::arg("z0") = py::none(), py::arg("tol") = 0.0,
      py::arg("max_iter") = 10000, py::arg("precision") = "double",
      "Run a solver on a catalog name or a .json problem file. tol <= 0 keeps the precision default.");

  m.def(
      "rate_report",
      [](const std::vector<double>& d, double eps, double scale) { return rate_dict(rate_report(d, eps, scale)); },
      py::arg("distances"), py::arg("eps") = std::numeric_limits<double>::epsilon(), py::arg("scale") = 1.0);

  m.def(
      "circumcenter",
      [](const std::vector<Vector>& points) {
        const CircumResult<double> c = circumcenter<double>(points);
        return py::make_tuple(c.center, std::string(status_name(c.status)));
      },
      py::arg("points"));

  m.def(
      "table1",
      [](const std::string& precision) {
        const Table1Result r = precision == "quad" ? reproduce_table1<Quad>() : reproduce_table1<double>();
        py::list rows;
        for (const RatioRow& row : r.rows) {
          py::dict d;
          d["k"] = row.k;
          d["dist"] = row.dist;
          d["linear"] = row.linear;
          d["quadratic"] = row.quadratic;
          d["below_floor"] = row.below_floor;
          rows.append(d);
        }
        return rows;
      },
      py::arg("precision") = "double");

  m.def(
      "table2",
      [](int sublinear_cap) {
        Table2Options opt;
        opt.sublinear_cap = sublinear_cap;
        std::vector<Table2Cell> cells;
        {
          py::gil_scoped_release release;
          cells = reproduce_table2(opt);
        }
        py::list out;
        for (const Table2Cell& c : cells) {
          py::dict d;
          d["variant"] = c.variant == LineVariant::line ? "line" : "halfplane";
          d["beta"] = c.beta;
          d["alpha"] = c.alpha;
          d["method"] = std::string(method_name(c.method));
          d["claimed"] = expected_name(c.claimed);
          d["observed"] = c.observed ? py::object(rate_dict(*c.observed)) : py::none();
          d["error"] = c.error;
          d["matches"] = c.matches;
          out.append(d);
        }
        return out;
      },
      py::arg("sublinear_cap") = 2000);
}
