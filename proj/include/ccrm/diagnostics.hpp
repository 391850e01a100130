#pragma once

#include "ccrm/solvers.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

namespace ccrm {

enum class RateClass { linear, sublinear, superlinear, quadratic };

std::string_view rate_name(RateClass c);

struct RateReport {
  std::vector<double> linear_ratios;  // d[k+1] / d[k]
  std::vector<double> quad_ratios;    // d[k+1] / d[k]^2
  RateClass classification = RateClass::linear;
  double constant = std::numeric_limits<double>::quiet_NaN();  // c for linear, C for quadratic
  std::size_t usable = 0;  // leading entries above the precision floor
};

/// Classifies a distance sequence. Only the leading run of entries above
/// 1e3 * eps * scale is used; eps is the unit roundoff of the arithmetic the
/// distances were computed in. Throws InputError with fewer than 3 usable entries.
RateReport rate_report(const std::vector<double>& distances, double eps = std::numeric_limits<double>::epsilon(),
                       double scale = 1.0);

struct CurvatureValue {
  double kappa = 0;
  Vector direction;  // unit tangent vector attaining kappa
};

/// Spectral radius of the Hessian restricted to the tangent space, divided
/// by the gradient norm. The jet is taken in whatever coordinates it is given.
CurvatureValue curvature_from_jet(const BoundaryJet<double>& jet);

/// Curvature of the relative boundary at z. The direction is returned in
/// ambient coordinates. Throws RegularityError when the gradient vanishes and
/// InputError when z is visibly off the boundary.
CurvatureValue curvature(const ConvexSet<double>& set, const Vector& z);

struct TangentBoundReport {
  double kappa = 0;
  double worst_ratio = 0;  // max dist(w, C) / ||w - p||^2 over checked samples
  std::size_t checked = 0;
  bool passed = true;
};

/// Checks dist(w, C) <= (1 + margin) kappa ||w - p||^2 for samples w on the
/// tangent hyperplane at p with ||w - p|| <= 0.1 / kappa.
TangentBoundReport tangent_bound_check(const ConvexSet<double>& set, const Vector& p,
                                       const std::vector<Vector>& samples, double margin = 0.1);

struct OmegaOptions {
  std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4};
  int samples_per_radius = 200;
  std::uint64_t seed = 1;
  double dykstra_tol = 1e-13;
  int dykstra_max_iter = 100000;
};

/// Minimum over sphere samples around z_bar of max(dist X, dist Y) / dist(X cap Y).
/// Samples are drawn inside the common hull when the problem has one.
double estimate_omega(const FeasibilityProblem<double>& problem, const Vector& z_bar, const OmegaOptions& options = {});

struct QuadConstantReport {
  bool applicable = false;  // false unless the sequence classifies as quadratic
  double observed = 0;
  double theorem_bound = 0;  // 4 max(kappa) / omega
  double sharp_bound = 0;    // max(kappa) / omega
  bool theorem_pass = false;
  bool sharp_pass = false;
};

QuadConstantReport quad_constant_check(const std::vector<double>& distances, double kappa_x, double kappa_y, double omega,
                                       double eps = std::numeric_limits<double>::epsilon(), double scale = 1.0,
                                       double margin = 0.1);

struct FejerReport {
  double worst_factor = 0;  // max ||z^k - limit|| / dist(z^k, solution set)
  std::size_t checked = 0;
  bool passed = true;
};

/// Checks ||z^k - limit|| <= 2 dist(z^k, S) + 1e-9 along the iterates.
FejerReport fejer_bound_check(const std::vector<Vector>& iterates, const Vector& limit,
                              const std::function<Vector(const Vector&)>& project_solution_set);

}  // namespace ccrm
