#pragma once

#include "ccrm/diagnostics.hpp"
#include "ccrm/problems.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ccrm {

/// One row of a distance table: d_k, d_{k+1} and both ratios.
struct RatioRow {
  std::size_t k = 0;
  double dist = 0;
  double next = 0;  // NaN when the run ended first
  double linear = 0;
  double quadratic = 0;
  bool below_floor = false;  // d_{k+1} under the precision floor or missing
};

struct Table1Result {
  std::string precision;
  std::vector<RatioRow> rows;  // k = 0..4
  double floor = 0;
  double seconds = 0;
};

/// cCRM on the two discs from their default start, measured against the
/// known intersection point of the boundary circles.
template <class R> Table1Result reproduce_table1();

struct Table2Cell {
  LineVariant variant = LineVariant::halfplane;
  double beta = 0;
  double alpha = 0;
  Method method = Method::ccrm;
  Expectation claimed;
  std::optional<RateReport> observed;
  std::string error;  // set when the run or the classification failed
  std::size_t iterations = 0;
  Termination termination = Termination::max_iter;
  double seconds = 0;
  bool matches = false;
};

struct Table2Options {
  int sublinear_cap = 2000;  // iteration cap for cells that never reach tolerance
  double tol_floor = 1e-28;
};

/// Stopping tolerance for the epigraph pair. At beta = 0 the projection
/// loses its tangential component once x^(2 alpha - 2) drops below eps, so
/// the run stops while the step is still resolvable.
double epigraph_stop_tol(double alpha, double beta, double eps, double floor);

/// Whether an observed rate satisfies a claimed one. A claimed superlinear
/// rate is met by quadratic; linear constants must agree within constant_tol.
bool rate_matches(const Expectation& claimed, const RateReport& observed, double constant_tol = 1e-2);

/// MAP/CRM/cCRM on (beta, alpha) in {(0,2),(0,3),(1,1.5),(1,2),(1,3)} for both
/// Y variants, 30 cells, in binary128.
std::vector<Table2Cell> reproduce_table2(const Table2Options& options = {});

std::string expected_name(const Expectation& e);
/// Three significant digits, scientific.
std::string sci3(double x);

extern template Table1Result reproduce_table1<double>();
extern template Table1Result reproduce_table1<Quad>();

}  // namespace ccrm
