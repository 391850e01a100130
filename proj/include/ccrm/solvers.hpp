#pragma once

#include "ccrm/circumcenter.hpp"
#include "ccrm/sets.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace ccrm {

enum class Method { ccrm, map, crm };
enum class Termination { feasible, max_iter, stagnation };

std::string_view method_name(Method m);
Method method_from_name(std::string_view name);
std::string_view termination_name(Termination t);

/// Curvatures of both boundaries at the limit and the error-bound constant.
struct KnownConstants {
  double kappa_x = 0;
  double kappa_y = 0;
  double omega = 0;
};

template <class R> struct FeasibilityProblem {
  SetPtr<R> X;
  SetPtr<R> Y;
  std::optional<AffineSubspace<R>> common_hull;
  std::optional<Vec<R>> reference;
  std::optional<KnownConstants> constants;

  Index dim() const { return X->dim(); }
  /// Throws InputError on null sets or mismatched dimensions.
  void validate() const;
};

template <class R> struct SolverConfig {
  Method method = Method::ccrm;
  int max_iter = 10000;
  R tol_feas = Precision<R>::tol_feas();  // stop when max(dist X, dist Y) <= tol_feas
  R tol_step = Precision<R>::tol_step();  // stop when ||z+ - z|| <= tol_step (1 + ||z||)
  bool record_internals = true;
};

template <class R> struct SolveTrace {
  Method method = Method::ccrm;
  std::vector<Vec<R>> iterates;
  // Entry k belongs to the step iterates[k] -> iterates[k+1]; filled for
  // cCRM runs with record_internals.
  std::vector<Vec<R>> centralized;
  std::vector<CircumStatus> statuses;
  std::vector<R> dist_x;
  std::vector<R> dist_y;
  std::vector<R> dist_ref;  // empty without a reference point
  Termination termination = Termination::max_iter;

  std::size_t size() const { return iterates.size(); }
  R residual(std::size_t k) const { return dist_x[k] > dist_y[k] ? dist_x[k] : dist_y[k]; }
};

template <class R> struct CcrmStep {
  Vec<R> next;
  Vec<R> centralized;
  CircumStatus status = CircumStatus::nondegenerate;
};

/// One centralized circumcentered-reflection step.
template <class R> CcrmStep<R> ccrm_step(const FeasibilityProblem<R>& problem, const Vec<R>& z);
/// P_Y(P_X(z)).
template <class R> Vec<R> map_step(const FeasibilityProblem<R>& problem, const Vec<R>& z);
/// Circumcenter of {z, R_X z, R_Y R_X z}.
template <class R> CircumResult<R> crm_step(const FeasibilityProblem<R>& problem, const Vec<R>& z);

template <class R> SolveTrace<R> run(const FeasibilityProblem<R>& problem, const SolverConfig<R>& config, const Vec<R>& z0);

template <class R> struct ReducedProblem {
  FeasibilityProblem<R> problem;  // sets live in R^d, d = chart.dim()
  AffineSubspace<R> chart;

  Vec<R> to_reduced(const Vec<R>& z) const { return chart.to_coords(z); }
  Vec<R> to_ambient(const Vec<R>& y) const { return chart.from_coords(y); }
};

/// Expresses a problem confined to its common hull in orthonormal hull
/// coordinates. Discs in a plane become plain discs; other sets are wrapped.
/// Throws UnsupportedError without a common hull.
template <class R> ReducedProblem<R> isometry_reduce(const FeasibilityProblem<R>& problem);

/// Internals of one cCRM step on (x, 0) for the pair {y >= |x|^alpha}, {y <= 0}.
template <class R> struct EpigraphScalarStep {
  R next;
  R u;  // P_X(x, 0) = (u, u^alpha)
  R v;  // P_X(u, 0) = (v, v^alpha)
  R a;  // centralized point (a, h)
  R h;
  R p;  // P_X(a, h) = (p, p^alpha)
};

template <class R> EpigraphScalarStep<R> epigraph_scalar_step(const R& alpha, const R& x);

#define CCRM_EXTERN_SOLVERS(R)                                                                          \
  extern template struct FeasibilityProblem<R>;                                                         \
  extern template CcrmStep<R> ccrm_step<R>(const FeasibilityProblem<R>&, const Vec<R>&);                \
  extern template Vec<R> map_step<R>(const FeasibilityProblem<R>&, const Vec<R>&);                      \
  extern template CircumResult<R> crm_step<R>(const FeasibilityProblem<R>&, const Vec<R>&);             \
  extern template SolveTrace<R> run<R>(const FeasibilityProblem<R>&, const SolverConfig<R>&, const Vec<R>&); \
  extern template ReducedProblem<R> isometry_reduce<R>(const FeasibilityProblem<R>&);                   \
  extern template EpigraphScalarStep<R> epigraph_scalar_step<R>(const R&, const R&);
CCRM_EXTERN_SOLVERS(double)
CCRM_EXTERN_SOLVERS(Quad)
#undef CCRM_EXTERN_SOLVERS

}  // namespace ccrm
