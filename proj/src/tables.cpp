#include "ccrm/tables.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

namespace ccrm {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

template <class R> Table1Result reproduce_table1() {
  const auto t0 = std::chrono::steady_clock::now();
  const CatalogEntry<R> entry = make_discs3d<R>();
  SolverConfig<R> config;
  config.record_internals = false;
  const SolveTrace<R> trace = run(entry.problem, config, entry.z0);

  Table1Result out;
  out.precision = std::is_same_v<R, double> ? "double" : "binary128";
  out.floor = 1e3 * to_double(Precision<R>::eps()) * (1.0 + to_double(R(entry.problem.reference->norm())));
  const std::vector<R>& d = trace.dist_ref;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < 5 && k < d.size(); ++k) {
    RatioRow row;
    row.k = k;
    row.dist = to_double(d[k]);
    row.next = k + 1 < d.size() ? to_double(d[k + 1]) : nan;
    row.below_floor = !(row.next > out.floor);
    if (k + 1 < d.size()) {
      row.linear = to_double(R(d[k + 1] / d[k]));
      row.quadratic = to_double(R(d[k + 1] / (d[k] * d[k])));
    } else {
      row.linear = row.quadratic = nan;
    }
    out.rows.push_back(row);
  }
  out.seconds = seconds_since(t0);
  return out;
}

double epigraph_stop_tol(double alpha, double beta, double eps, double floor) {
  if (beta != 0) return floor;
  return std::max(floor, std::pow(1e4 * eps, alpha / (2 * alpha - 2)));
}

bool rate_matches(const Expectation& claimed, const RateReport& observed, double constant_tol) {
  switch (claimed.rate) {
    case ExpectedRate::quadratic:
      return observed.classification == RateClass::quadratic;
    case ExpectedRate::superlinear:
      return observed.classification == RateClass::superlinear || observed.classification == RateClass::quadratic;
    case ExpectedRate::sublinear:
      return observed.classification == RateClass::sublinear;
    case ExpectedRate::linear:
      if (observed.classification != RateClass::linear) return false;
      return !claimed.constant || std::abs(observed.constant - *claimed.constant) <= constant_tol;
  }
  return false;
}

std::vector<Table2Cell> reproduce_table2(const Table2Options& options) {
  const double cells[5][2] = {{0, 2}, {0, 3}, {1, 1.5}, {1, 2}, {1, 3}};
  const double eps = to_double(Precision<Quad>::eps());
  std::vector<Table2Cell> out;
  for (LineVariant variant : {LineVariant::halfplane, LineVariant::line}) {
    for (const auto& bc : cells) {
      for (Method method : {Method::map, Method::crm, Method::ccrm}) {
        const auto t0 = std::chrono::steady_clock::now();
        Table2Cell cell;
        cell.variant = variant;
        cell.beta = bc[0];
        cell.alpha = bc[1];
        cell.method = method;
        const CatalogEntry<Quad> entry = make_epigraph<Quad>(cell.alpha, cell.beta, variant);
        cell.claimed = entry.expected.at(method);

        SolverConfig<Quad> config;
        config.method = method;
        config.record_internals = false;
        config.tol_feas = Quad(epigraph_stop_tol(cell.alpha, cell.beta, eps, options.tol_floor));
        if (cell.claimed.rate == ExpectedRate::sublinear) config.max_iter = options.sublinear_cap;
        try {
          const SolveTrace<Quad> trace = run(entry.problem, config, entry.z0);
          cell.iterations = trace.size() - 1;
          cell.termination = trace.termination;
          std::vector<double> dist;
          for (const Quad& x : trace.dist_ref) dist.push_back(to_double(x));
          const double scale = 1.0 + to_double(Quad(entry.problem.reference->norm()));
          cell.observed = rate_report(dist, eps, scale);
          cell.matches = rate_matches(cell.claimed, *cell.observed);
        } catch (const Error& e) {
          cell.error = e.what();
        }
        cell.seconds = seconds_since(t0);
        out.push_back(std::move(cell));
      }
    }
  }
  return out;
}

std::string expected_name(const Expectation& e) {
  std::string s;
  switch (e.rate) {
    case ExpectedRate::linear: s = "linear"; break;
    case ExpectedRate::sublinear: s = "sublinear"; break;
    case ExpectedRate::superlinear: s = "superlinear"; break;
    case ExpectedRate::quadratic: s = "quadratic"; break;
  }
  if (e.constant) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " %.3g", *e.constant);
    s += buf;
  }
  return s;
}

std::string sci3(double x) {
  if (std::isnan(x)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

template Table1Result reproduce_table1<double>();
template Table1Result reproduce_table1<Quad>();

}  // namespace ccrm
