#include "ccrm/diagnostics.hpp"
#include "ccrm/io.hpp"
#include "ccrm/problems.hpp"
#include "ccrm/tables.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

using namespace ccrm;

namespace {

constexpr int exit_feasible = 0;
constexpr int exit_input = 1;
constexpr int exit_not_converged = 2;
constexpr int exit_numerical = 3;

template <class R> struct LoadedProblem {
  FeasibilityProblem<R> problem;
  std::optional<Vec<R>> z0;
  std::map<Method, Expectation> expected;
  std::vector<std::string> warnings;
};

bool looks_like_file(const std::string& spec) {
  return spec.size() > 5 && spec.compare(spec.size() - 5, 5, ".json") == 0;
}

template <class R> LoadedProblem<R> load_problem(const std::string& spec) {
  LoadedProblem<R> out;
  if (looks_like_file(spec)) {
    const Json j = read_json_file(spec);
    out.problem = problem_from_json<R>(j);
    if (auto z0 = start_from_json(j)) out.z0 = from_double<R>(*z0);
    return out;
  }
  CatalogEntry<R> entry = resolve_problem<R>(spec);
  out.problem = std::move(entry.problem);
  out.z0 = std::move(entry.z0);
  out.expected = std::move(entry.expected);
  out.warnings = std::move(entry.warnings);
  return out;
}

Vector parse_csv_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      throw InputError("not a number: '" + cell + "'");
    }
    if (cell.find_first_not_of(" \t", used) != std::string::npos) throw InputError("not a number: '" + cell + "'");
    values.push_back(v);
  }
  if (values.empty()) throw InputError("empty point");
  return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

Json ratios_json(const RateReport& r) { return {{"linear", r.linear_ratios}, {"quadratic", r.quad_ratios}}; }

// Distances used for rate classification: to the reference point when the
// problem has one, else to the final iterate (dropping the last two entries,
// which carry the iterate's own rounding).
template <class R> std::vector<double> rate_distances(const SolveTrace<R>& trace) {
  std::vector<double> d;
  if (!trace.dist_ref.empty()) {
    for (const R& x : trace.dist_ref) d.push_back(to_double(x));
    return d;
  }
  const Vec<R>& last = trace.iterates.back();
  for (std::size_t k = 0; k + 2 < trace.size(); ++k) d.push_back(to_double(R((trace.iterates[k] - last).norm())));
  return d;
}

struct SolveOptions {
  std::string problem;
  std::string method = "ccrm";
  std::string z0 = "default";
  std::optional<double> tol;
  int max_iter = 10000;
  std::string out;
  std::string report;
  std::string precision = "double";
};

template <class R> int solve(const SolveOptions& o) {
  // Everything that can fail on input happens before any file is written.
  const Method method = method_from_name(o.method);
  LoadedProblem<R> lp = load_problem<R>(o.problem);
  const FeasibilityProblem<R>& problem = lp.problem;
  Vec<R> z0;
  if (o.z0 == "default") {
    if (!lp.z0) throw InputError("problem has no default start; pass --z0");
    z0 = *lp.z0;
  } else {
    z0 = from_double<R>(parse_csv_vector(o.z0));
  }
  if (z0.size() != problem.dim())
    throw InputError("z0 has dimension " + std::to_string(z0.size()) + ", problem has " + std::to_string(problem.dim()));
  if (o.max_iter < 0) throw InputError("--max-iter must be nonnegative");
  SolverConfig<R> config;
  config.method = method;
  config.max_iter = o.max_iter;
  if (o.tol) {
    if (!(*o.tol > 0)) throw InputError("--tol must be positive");
    config.tol_feas = R(*o.tol);
  }
  for (const auto& w : lp.warnings) std::cerr << "warning: " << w << '\n';

  const SolveTrace<R> trace = run(problem, config, z0);
  const std::size_t last = trace.size() - 1;

  Json report;
  std::optional<RateReport> rate;
  try {
    rate = rate_report(rate_distances(trace), to_double(Precision<R>::eps()), 1.0 + to_double(R(trace.iterates.back().norm())));
  } catch (const InputError& e) {
    report["note"] = e.what();
  }
  report["method"] = std::string(method_name(method));
  report["precision"] = o.precision;
  report["termination"] = std::string(termination_name(trace.termination));
  report["iterations"] = last;
  report["residual"] = to_double(trace.residual(last));
  report["classification"] = rate ? Json(std::string(rate_name(rate->classification))) : Json(nullptr);
  report["ratios"] = rate ? ratios_json(*rate) : Json(nullptr);
  Json constants = Json::object();
  if (rate && std::isfinite(rate->constant)) constants["rate"] = rate->constant;
  Json flags{{"feasible", trace.termination == Termination::feasible}};
  if (auto it = lp.expected.find(method); it != lp.expected.end()) {
    report["expected"] = expected_name(it->second);
    flags["expected_rate"] = rate ? Json(rate_matches(it->second, *rate)) : Json(nullptr);
  }
  if (problem.constants) {
    const KnownConstants& k = *problem.constants;
    const double kappa = std::max(k.kappa_x, k.kappa_y);
    constants["kappa_x"] = k.kappa_x;
    constants["kappa_y"] = k.kappa_y;
    constants["omega"] = k.omega;
    constants["theorem_bound"] = 4 * kappa / k.omega;
    constants["sharp_bound"] = kappa / k.omega;
    if (rate && rate->classification == RateClass::quadratic) flags["theorem_bound"] = rate->constant <= 4 * kappa / k.omega;
  }
  report["constants"] = constants;
  report["pass_flags"] = flags;

  if (!o.out.empty()) {
    const bool as_json = std::filesystem::path(o.out).extension() == ".json";
    write_file_atomic(o.out, as_json ? trace_to_json(trace).dump(1) + "\n" : trace_to_csv(trace));
  }
  if (!o.report.empty()) write_file_atomic(o.report, report.dump(2) + "\n");

  std::printf("%s: %zu iterations, %s, residual %s", std::string(method_name(method)).c_str(), last,
              std::string(termination_name(trace.termination)).c_str(), sci3(to_double(trace.residual(last))).c_str());
  if (rate) {
    std::printf(", rate %s", std::string(rate_name(rate->classification)).c_str());
    if (std::isfinite(rate->constant)) std::printf(" (constant %s)", sci3(rate->constant).c_str());
  }
  std::printf("\n");
  return trace.termination == Termination::feasible ? exit_feasible : exit_not_converged;
}

int table1(const std::string& precision, const std::string& csv) {
  const Table1Result t = precision == "quad" ? reproduce_table1<Quad>() : reproduce_table1<double>();
  std::printf("cCRM on two discs in R^3, z0 = (sqrt(15)/2, 4, 1/2), %s\n", t.precision.c_str());
  std::printf("%3s  %12s  %12s  %12s  %12s\n", "k", "|z_k - z*|", "|z_k+1 - z*|", "linear", "quadratic");
  bool footnote = false;
  std::ostringstream rows;
  rows << "k,dist,next,linear_ratio,quadratic_ratio,below_floor\n";
  for (const RatioRow& r : t.rows) {
    const char* mark = r.below_floor ? " *" : "";
    footnote = footnote || r.below_floor;
    std::printf("%3zu  %12s  %12s  %12s  %12s%s\n", r.k, sci3(r.dist).c_str(),
                r.below_floor ? "-" : sci3(r.next).c_str(), r.below_floor ? "-" : sci3(r.linear).c_str(),
                r.below_floor ? "-" : sci3(r.quadratic).c_str(), mark);
    rows << r.k << ',' << format_double(r.dist) << ',' << format_double(r.next) << ',' << format_double(r.linear) << ','
         << format_double(r.quadratic) << ',' << (r.below_floor ? 1 : 0) << '\n';
  }
  if (footnote)
    std::printf("* next distance is below the precision floor %s (or the run already stopped); "
                "rerun with --precision quad\n",
                sci3(t.floor).c_str());
  std::printf("elapsed %.3f s\n", t.seconds);
  if (!csv.empty()) write_file_atomic(csv, rows.str());
  return 0;
}

std::string cell_text(const Table2Cell& c) {
  if (!c.error.empty()) return "error";
  std::string s(rate_name(c.observed->classification));
  if (c.observed->classification == RateClass::linear) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %.3g", c.observed->constant);
    s += buf;
  }
  if (!c.matches) s += " (!)";
  return s;
}

int table2(const std::string& csv, int cap) {
  Table2Options options;
  options.sublinear_cap = cap;
  const std::vector<Table2Cell> cells = reproduce_table2(options);
  std::printf("Epigraph pair {y >= |x|^a - b}, binary128\n");
  std::printf("%-10s %4s %4s   %-22s %-22s %-22s\n", "Y", "b", "a", "MAP", "CRM", "cCRM");
  std::ostringstream rows;
  rows << "variant,beta,alpha,method,claimed,observed,constant,iterations,termination,matches\n";
  std::size_t matched = 0;
  double seconds = 0;
  for (std::size_t i = 0; i < cells.size(); i += 3) {
    const Table2Cell& c = cells[i];
    std::printf("%-10s %4g %4g   %-22s %-22s %-22s\n", c.variant == LineVariant::line ? "line" : "halfplane", c.beta,
                c.alpha, cell_text(cells[i]).c_str(), cell_text(cells[i + 1]).c_str(), cell_text(cells[i + 2]).c_str());
  }
  for (const Table2Cell& c : cells) {
    matched += c.matches;
    seconds += c.seconds;
    rows << (c.variant == LineVariant::line ? "line" : "halfplane") << ',' << c.beta << ',' << c.alpha << ','
         << method_name(c.method) << ',' << expected_name(c.claimed) << ','
         << (c.observed ? std::string(rate_name(c.observed->classification)) : "error") << ','
         << (c.observed && std::isfinite(c.observed->constant) ? format_double(c.observed->constant) : "") << ','
         << c.iterations << ',' << termination_name(c.termination) << ',' << (c.matches ? 1 : 0) << '\n';
  }
  std::printf("%zu/%zu cells match the claimed rates ((!) marks a mismatch); elapsed %.2f s\n", matched, cells.size(),
              seconds);
  if (!csv.empty()) write_file_atomic(csv, rows.str());
  return 0;
}

int diagnose(const std::string& spec, const std::string& point_text, const std::string& out) {
  const LoadedProblem<double> lp = load_problem<double>(spec);
  const FeasibilityProblem<double>& problem = lp.problem;
  Vector point;
  if (point_text == "reference") {
    if (!problem.reference) throw InputError("problem has no reference point; pass --point");
    point = *problem.reference;
  } else {
    point = parse_csv_vector(point_text);
  }
  if (point.size() != problem.dim()) throw InputError("point has the wrong dimension");

  Json report;
  report["point"] = std::vector<double>(point.data(), point.data() + point.size());
  std::optional<double> kx, ky, omega;
  auto set_report = [&](const char* key, const ConvexSet<double>& set, std::optional<double>& kappa) {
    Json j;
    j["kind"] = std::string(kind_name(set.kind()));
    try {
      kappa = curvature(set, point).kappa;
      j["kappa"] = *kappa;
    } catch (const Error& e) {
      j["kappa"] = nullptr;
      j["error"] = e.what();
    }
    report[key] = j;
  };
  set_report("X", *problem.X, kx);
  set_report("Y", *problem.Y, ky);
  try {
    omega = estimate_omega(problem, point);
    report["omega"] = *omega;
  } catch (const Error& e) {
    report["omega"] = nullptr;
    report["omega_error"] = e.what();
  }
  if (kx && ky && omega) {
    const double kappa = std::max(*kx, *ky);
    report["theorem_bound"] = 4 * kappa / *omega;
    report["sharp_bound"] = kappa / *omega;
  }
  if (problem.constants) {
    report["known_constants"] = {{"kappa_x", problem.constants->kappa_x},
                                 {"kappa_y", problem.constants->kappa_y},
                                 {"omega", problem.constants->omega}};
  }
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!out.empty()) write_file_atomic(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Centralized circumcentered-reflection solver for two-set convex feasibility"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve_cmd = app.add_subcommand("solve", "Run a solver on a catalog problem or a JSON problem file");
  solve_cmd->add_option("--problem", so.problem, "Catalog name (name:key=val,...) or problem.json")->required();
  solve_cmd->add_option("--method", so.method, "ccrm | map | crm")->check(CLI::IsMember({"ccrm", "map", "crm"}));
  solve_cmd->add_option("--z0", so.z0, "Start point as comma-separated floats, or 'default'");
  solve_cmd->add_option("--tol", so.tol, "Feasibility tolerance");
  solve_cmd->add_option("--max-iter", so.max_iter, "Iteration cap");
  solve_cmd->add_option("--out", so.out, "Trace output (.csv or .json)");
  solve_cmd->add_option("--report", so.report, "Rate report output (.json)");
  solve_cmd->add_option("--precision", so.precision, "double | quad")->check(CLI::IsMember({"double", "quad"}));

  std::string t1_precision = "double", t1_csv;
  auto* t1_cmd = app.add_subcommand("table1", "Distances and ratios of cCRM on the disc pair");
  t1_cmd->add_option("--precision", t1_precision, "double | quad")->check(CLI::IsMember({"double", "quad"}));
  t1_cmd->add_option("--csv", t1_csv, "Also write the rows as CSV");

  std::string t2_csv;
  int t2_cap = 2000;
  auto* t2_cmd = app.add_subcommand("table2", "Rate classification of MAP/CRM/cCRM on the epigraph pair");
  t2_cmd->add_option("--csv", t2_csv, "Also write the cells as CSV");
  t2_cmd->add_option("--sublinear-cap", t2_cap, "Iteration cap for cells that never reach tolerance")
      ->check(CLI::PositiveNumber);

  std::string d_problem, d_point = "reference", d_out;
  auto* d_cmd = app.add_subcommand("diagnose", "Curvatures, error-bound constant and predicted rate constants");
  d_cmd->add_option("--problem", d_problem, "Catalog name or problem.json")->required();
  d_cmd->add_option("--point", d_point, "Boundary point as comma-separated floats, or 'reference'");
  d_cmd->add_option("--out", d_out, "Also write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_input;
  }

  try {
    if (*solve_cmd) return so.precision == "quad" ? solve<Quad>(so) : solve<double>(so);
    if (*t1_cmd) return table1(t1_precision, t1_csv);
    if (*t2_cmd) return table2(t2_csv, t2_cap);
    if (*d_cmd) return diagnose(d_problem, d_point, d_out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
  return exit_input;
}
