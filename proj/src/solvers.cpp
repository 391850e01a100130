#include "ccrm/solvers.hpp"

#include <memory>

namespace ccrm {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::ccrm: return "ccrm";
    case Method::map: return "map";
    case Method::crm: return "crm";
  }
  return "unknown";
}

Method method_from_name(std::string_view name) {
  if (name == "ccrm") return Method::ccrm;
  if (name == "map") return Method::map;
  if (name == "crm") return Method::crm;
  throw InputError("unknown method '" + std::string(name) + "' (expected ccrm, map or crm)");
}

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::feasible: return "feasible";
    case Termination::max_iter: return "max_iter";
    case Termination::stagnation: return "stagnation";
  }
  return "unknown";
}

template <class R> void FeasibilityProblem<R>::validate() const {
  if (!X || !Y) throw InputError("problem: both sets are required");
  if (X->dim() != Y->dim()) throw InputError("problem: X and Y have different dimensions");
  if (common_hull && common_hull->ambient_dim() != X->dim()) throw InputError("problem: hull dimension differs");
  if (reference && reference->size() != X->dim()) throw InputError("problem: reference dimension differs");
}

namespace {

// Offsets below the rounding level of the base point carry no direction;
// left in, two of them read as a distinct collinear triple.
template <class R> Vec<R> drop_noise(Vec<R> d, const Vec<R>& base) {
  if (d.norm() <= R(16) * Precision<R>::eps() * (R(1) + base.norm())) d.setZero();
  return d;
}

}  // namespace

template <class R> CcrmStep<R> ccrm_step(const FeasibilityProblem<R>& problem, const Vec<R>& z) {
  const ConvexSet<R>& X = *problem.X;
  const ConvexSet<R>& Y = *problem.Y;
  const Vec<R> w = project(X, z);
  const Vec<R> y = project(Y, w);
  const Vec<R> zc = (y + project(X, y)) / R(2);
  // Offsets R_X(zc) - zc and R_Y(zc) - zc.
  const std::vector<Vec<R>> offsets{drop_noise<R>(R(2) * (project(X, zc) - zc), zc),
                                    drop_noise<R>(R(2) * (project(Y, zc) - zc), zc)};
  CircumResult<R> c = circumcenter_offsets<R>(zc, offsets);
  return {std::move(c.center), zc, c.status};
}

template <class R> Vec<R> map_step(const FeasibilityProblem<R>& problem, const Vec<R>& z) {
  return project(*problem.Y, project(*problem.X, z));
}

template <class R> CircumResult<R> crm_step(const FeasibilityProblem<R>& problem, const Vec<R>& z) {
  const Vec<R> d1 = drop_noise<R>(R(2) * (project(*problem.X, z) - z), z);
  const Vec<R> rx = z + d1;
  const Vec<R> d2 = drop_noise<R>(d1 + R(2) * (project(*problem.Y, rx) - rx), z);
  return circumcenter_offsets<R>(z, {d1, d2});
}

template <class R> SolveTrace<R> run(const FeasibilityProblem<R>& problem, const SolverConfig<R>& config, const Vec<R>& z0) {
  problem.validate();
  if (!(config.tol_feas > R(0))) throw InputError("solver: tol_feas must be positive");
  if (config.max_iter < 1) throw InputError("solver: max_iter must be at least 1");
  if (z0.size() != problem.dim()) throw InputError("solver: starting point has the wrong dimension");
  if (!all_finite(z0)) throw InputError("solver: starting point has non-finite entries");

  SolveTrace<R> trace;
  trace.method = config.method;
  auto record = [&](const Vec<R>& z) {
    trace.iterates.push_back(z);
    trace.dist_x.push_back(distance(*problem.X, z));
    trace.dist_y.push_back(distance(*problem.Y, z));
    if (problem.reference) trace.dist_ref.push_back((z - *problem.reference).norm());
  };

  record(z0);
  for (int k = 0;; ++k) {
    if (trace.residual(trace.size() - 1) <= config.tol_feas) {
      trace.termination = Termination::feasible;
      break;
    }
    if (k == config.max_iter) {
      trace.termination = Termination::max_iter;
      break;
    }
    const Vec<R> z = trace.iterates.back();
    Vec<R> next;
    switch (config.method) {
      case Method::ccrm: {
        CcrmStep<R> s = ccrm_step(problem, z);
        if (config.record_internals) {
          trace.centralized.push_back(s.centralized);
          trace.statuses.push_back(s.status);
        }
        next = std::move(s.next);
        break;
      }
      case Method::map: next = map_step(problem, z); break;
      case Method::crm: {
        CircumResult<R> c = crm_step(problem, z);
        if (config.record_internals) trace.statuses.push_back(c.status);
        next = std::move(c.center);
        break;
      }
    }
    if (!all_finite(next)) throw GeometryError("solver: step produced non-finite values");
    const R step = (next - z).norm();
    record(next);
    if (step <= config.tol_step * (R(1) + z.norm()) && trace.residual(trace.size() - 1) > config.tol_feas) {
      trace.termination = Termination::stagnation;
      break;
    }
  }
  return trace;
}

namespace {

template <class R> SetPtr<R> reduce_set(const SetPtr<R>& set, const AffineSubspace<R>& chart) {
  if (const auto* disc = dynamic_cast<const BallInAffine<R>*>(set.get());
      disc && disc->affine_hull()->dim() == chart.dim()) {
    return std::make_shared<Ball<R>>(chart.to_coords(disc->slice_center()), disc->slice_radius());
  }
  return std::make_shared<HullCoordinates<R>>(set, chart);
}

}  // namespace

template <class R> ReducedProblem<R> isometry_reduce(const FeasibilityProblem<R>& problem) {
  problem.validate();
  if (!problem.common_hull) throw UnsupportedError("isometry_reduce: problem has no common hull");
  const AffineSubspace<R>& chart = *problem.common_hull;
  if (chart.A().rows() == 0) {
    ReducedProblem<R> same{problem, chart};
    same.problem.common_hull.reset();
    return same;
  }
  FeasibilityProblem<R> reduced;
  reduced.X = reduce_set(problem.X, chart);
  reduced.Y = reduce_set(problem.Y, chart);
  if (problem.reference) reduced.reference = chart.to_coords(*problem.reference);
  reduced.constants = problem.constants;
  return {std::move(reduced), chart};
}

template <class R> EpigraphScalarStep<R> epigraph_scalar_step(const R& alpha, const R& x) {
  using std::pow;
  if (!(alpha > R(1))) throw InputError("epigraph_scalar_step: exponent must exceed 1");
  if (!(x > R(0)) || !is_finite(x)) throw InputError("epigraph_scalar_step: x must be positive");
  EpigraphScalarStep<R> s;
  s.u = power_epigraph_root<R>(alpha, x, R(0));
  s.v = power_epigraph_root<R>(alpha, s.u, R(0));
  s.a = (s.u + s.v) / R(2);
  s.h = pow(s.v, alpha) / R(2);
  s.p = power_epigraph_root<R>(alpha, s.a, s.h);
  const R pa = pow(s.p, alpha);
  // Equidistance of the new iterate (x+, 0) from (a, h) and (2p - a, 2p^alpha - h).
  s.next = s.p + pa * (pa - s.h) / (s.p - s.a);
  return s;
}

#define CCRM_INSTANTIATE_SOLVERS(R)                                                              \
  template struct FeasibilityProblem<R>;                                                         \
  template CcrmStep<R> ccrm_step<R>(const FeasibilityProblem<R>&, const Vec<R>&);                \
  template Vec<R> map_step<R>(const FeasibilityProblem<R>&, const Vec<R>&);                      \
  template CircumResult<R> crm_step<R>(const FeasibilityProblem<R>&, const Vec<R>&);             \
  template SolveTrace<R> run<R>(const FeasibilityProblem<R>&, const SolverConfig<R>&, const Vec<R>&); \
  template ReducedProblem<R> isometry_reduce<R>(const FeasibilityProblem<R>&);                   \
  template EpigraphScalarStep<R> epigraph_scalar_step<R>(const R&, const R&);
CCRM_INSTANTIATE_SOLVERS(double)
CCRM_INSTANTIATE_SOLVERS(Quad)

}  // namespace ccrm
