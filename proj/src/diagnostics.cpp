#include "ccrm/diagnostics.hpp"

#include "ccrm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ccrm {

std::string_view rate_name(RateClass c) {
  switch (c) {
    case RateClass::linear: return "linear";
    case RateClass::sublinear: return "sublinear";
    case RateClass::superlinear: return "superlinear";
    case RateClass::quadratic: return "quadratic";
  }
  return "unknown";
}

RateReport rate_report(const std::vector<double>& distances, double eps, double scale) {
  const double floor = 1e3 * eps * scale;
  std::size_t usable = 0;
  while (usable < distances.size() && std::isfinite(distances[usable]) && distances[usable] > floor) ++usable;
  if (usable < 3) throw InputError("rate_report: fewer than 3 distances above the precision floor");

  RateReport r;
  r.usable = usable;
  for (std::size_t k = 0; k + 1 < usable; ++k) {
    r.linear_ratios.push_back(distances[k + 1] / distances[k]);
    r.quad_ratios.push_back(distances[k + 1] / (distances[k] * distances[k]));
  }
  const auto& lin = r.linear_ratios;
  const auto& quad = r.quad_ratios;
  const std::size_t n = lin.size();

  // Ratios heading to zero must shrink visibly; a linear rate that sits at
  // 0.1 wobbles in the last digits and must not count.
  bool decreasing = lin[n - 1] < 0.9 * lin[n - 2];
  if (n >= 3) decreasing = decreasing && lin[n - 2] < 0.9 * lin[n - 3];
  const bool to_zero = decreasing && lin[n - 1] < 0.1;
  const double qa = quad[n - 2], qb = quad[n - 1];
  const bool quad_stable = std::abs(qb - qa) <= 0.2 * std::max(qa, qb);

  if (to_zero && quad_stable) {
    r.classification = RateClass::quadratic;
    r.constant = qb;
    return r;
  }
  if (to_zero) {
    r.classification = RateClass::superlinear;
    return r;
  }
  // Ratios creeping towards 1: the gap 1 - r keeps shrinking.
  const double last_gap = 1.0 - lin[n - 1];
  const double early_gap = 1.0 - lin[n / 4];
  if (lin[n - 1] > 0.99 && last_gap <= 0.5 * early_gap) {
    r.classification = RateClass::sublinear;
    r.constant = lin[n - 1];
    return r;
  }
  r.classification = RateClass::linear;
  const std::size_t tail = std::max<std::size_t>(1, n / 2);
  double log_sum = 0;
  for (std::size_t k = n - tail; k < n; ++k) log_sum += std::log(lin[k]);
  r.constant = std::exp(log_sum / static_cast<double>(tail));
  return r;
}

CurvatureValue curvature_from_jet(const BoundaryJet<double>& jet) {
  const double gnorm = jet.grad.norm();
  if (!(gnorm > 1e-10)) throw RegularityError("curvature: gradient vanishes, the boundary is not regular here");
  const Index d = jet.grad.size();
  const Matrix T = orthonormal_nullspace<double>(Matrix(jet.grad.transpose())).basis;
  CurvatureValue out;
  if (T.cols() == 0) {
    out.direction = Vector::Zero(d);
    return out;
  }
  const Matrix H = T.transpose() * jet.hess * T;
  const SymEig<double> eig = symmetric_eigh<double>(Matrix((H + H.transpose()) / 2.0));
  const Index last = eig.values.size() - 1;
  const Index pick = std::abs(eig.values[0]) > std::abs(eig.values[last]) ? 0 : last;
  out.kappa = std::abs(eig.values[pick]) / gnorm;
  out.direction = T * eig.vectors.col(pick);
  return out;
}

CurvatureValue curvature(const ConvexSet<double>& set, const Vector& z) {
  const BoundaryJet<double> jet = boundary_eval<double>(set, z);
  if (std::abs(jet.g) > 1e-6 * std::max(1.0, jet.grad.norm() * (1.0 + z.norm())))
    throw InputError("curvature: point is not on the relative boundary");
  CurvatureValue out = curvature_from_jet(jet);
  if (const auto& hull = set.affine_hull()) out.direction = hull->basis() * out.direction;
  return out;
}

TangentBoundReport tangent_bound_check(const ConvexSet<double>& set, const Vector& p, const std::vector<Vector>& samples,
                                       double margin) {
  const CurvatureValue kv = curvature(set, p);
  Vector normal = set.ambient_jet(p).grad;
  const auto& hull = set.affine_hull();
  if (hull) normal = hull->basis() * (hull->basis().transpose() * normal);
  normal.normalize();

  TangentBoundReport rep;
  rep.kappa = kv.kappa;
  const double reach = kv.kappa > 0 ? 0.1 / kv.kappa : std::numeric_limits<double>::infinity();
  for (const Vector& w : samples) {
    const Vector step = w - p;
    double off = std::abs(normal.dot(step));
    if (hull) off = std::max(off, (step - hull->basis() * (hull->basis().transpose() * step)).norm());
    if (off > 1e-10 * (1.0 + step.norm())) throw InputError("tangent_bound_check: sample is off the tangent hyperplane");
    const double len = step.norm();
    if (len == 0 || len > reach) continue;
    const double ratio = distance<double>(set, w) / (len * len);
    rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    ++rep.checked;
    if (ratio > (1.0 + margin) * kv.kappa + 1e-12 / (len * len)) rep.passed = false;
  }
  return rep;
}

double estimate_omega(const FeasibilityProblem<double>& problem, const Vector& z_bar, const OmegaOptions& options) {
  problem.validate();
  const std::vector<SetPtr<double>> both{problem.X, problem.Y};
  const Index n = problem.dim();
  const Matrix basis = problem.common_hull ? problem.common_hull->basis() : Matrix::Identity(n, n);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  double best = std::numeric_limits<double>::infinity();
  for (double radius : options.radii) {
    for (int s = 0; s < options.samples_per_radius; ++s) {
      Vector g(basis.cols());
      for (Index i = 0; i < g.size(); ++i) g[i] = gauss(rng);
      Vector dir = basis * g;
      const double len = dir.norm();
      if (len == 0) continue;
      const Vector z = z_bar + (radius / len) * dir;
      const double to_both =
          (z - dykstra_project<double>(both, z, options.dykstra_tol, options.dykstra_max_iter)).norm();
      if (to_both <= 1e-12) continue;
      const double worst = std::max(distance<double>(*problem.X, z), distance<double>(*problem.Y, z));
      best = std::min(best, worst / to_both);
    }
  }
  if (!std::isfinite(best)) throw Error("estimate_omega: every sample was inside the intersection");
  return best;
}

QuadConstantReport quad_constant_check(const std::vector<double>& distances, double kappa_x, double kappa_y, double omega,
                                       double eps, double scale, double margin) {
  if (!(omega > 0)) throw InputError("quad_constant_check: omega must be positive");
  if (kappa_x < 0 || kappa_y < 0) throw InputError("quad_constant_check: curvatures must be nonnegative");
  QuadConstantReport rep;
  const double kappa = std::max(kappa_x, kappa_y);
  rep.sharp_bound = kappa / omega;
  rep.theorem_bound = 4.0 * kappa / omega;
  const RateReport rr = rate_report(distances, eps, scale);
  if (rr.classification != RateClass::quadratic) return rep;
  rep.applicable = true;
  rep.observed = rr.constant;
  rep.theorem_pass = rep.observed <= (1.0 + margin) * rep.theorem_bound;
  rep.sharp_pass = rep.observed <= (1.0 + margin) * rep.sharp_bound;
  return rep;
}

FejerReport fejer_bound_check(const std::vector<Vector>& iterates, const Vector& limit,
                              const std::function<Vector(const Vector&)>& project_solution_set) {
  FejerReport rep;
  for (const Vector& z : iterates) {
    const double to_limit = (z - limit).norm();
    const double to_set = (z - project_solution_set(z)).norm();
    ++rep.checked;
    if (to_set > 0) rep.worst_factor = std::max(rep.worst_factor, to_limit / to_set);
    if (to_limit > 2.0 * to_set + 1e-9) rep.passed = false;
  }
  return rep;
}

}  // namespace ccrm
