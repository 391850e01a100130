#pragma once

#include "ccrm/solvers.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ccrm {

enum class ExpectedRate { linear, sublinear, superlinear, quadratic };

struct Expectation {
  ExpectedRate rate = ExpectedRate::linear;
  std::optional<double> constant;  // asymptotic constant of a linear rate
};

template <class R> struct CatalogEntry {
  std::string name;
  FeasibilityProblem<R> problem;
  Vec<R> z0;
  std::map<Method, Expectation> expected;
  std::vector<std::string> warnings;
};

enum class LineVariant { halfplane, line };

/// Two radius-2 discs in the plane z3 = 0 of R^3, centers 0 and (sqrt 15, 0, 0).
template <class R> CatalogEntry<R> make_discs3d();

/// Ellipses x^2/4 + y^2 <= 1 and (x-1)^2 + y^2/4 <= 1 in the plane z3 = 0.
template <class R> CatalogEntry<R> make_ellipses();
/// Curvature of the boundary of the first ellipse at (2 cos t, sin t, 0).
double ellipse_curvature(double t);

/// {y >= |x|^alpha - beta} against {y <= 0} (halfplane) or {y = 0} (line).
template <class R> CatalogEntry<R> make_epigraph(double alpha, double beta, LineVariant variant);

/// Ellipsoid {z : ||B (z - c)|| <= r}.
struct EllipsoidSpec {
  Matrix B;
  Vector c;
  double r = 1;
};

/// Two ellipsoids sliced by L = {A z = b}; each slice is an exact ellipsoid
/// in the coordinates of L. A Dykstra probe checks for a common point.
template <class R>
CatalogEntry<R> make_eq_constrained_ellipsoids(const Matrix& A, const Vector& b, const EllipsoidSpec& first,
                                               const EllipsoidSpec& second);

/// X = {z : C z + d in SOC} cap L, Y = ball(center, radius) cap L.
template <class R>
CatalogEntry<R> make_socp(const Matrix& A, const Vector& b, const Matrix& C, const Vector& d, const Vector& ball_center,
                          double ball_radius);

/// X = PSD cap {<A_i, S> = b_i}, Y = Frobenius ball(S_hat, r) cap the same
/// subspace, in flattened symmetric coordinates.
template <class R>
CatalogEntry<R> make_sdp_feasibility(const std::vector<Matrix>& constraints, const Vector& b, const Matrix& center,
                                     double radius);

/// X = {lambda_max <= a, tr = 1}, Y = Frobenius ball(S_hat, r) cap {tr = 1}.
template <class R> CatalogEntry<R> make_fixed_trace(double bound, const Matrix& center, double radius);

/// Deterministic trace-free symmetric matrix with unit Frobenius norm.
Matrix seeded_trace_free(Index n, std::uint64_t seed);

/// Catalog lookup. Accepts "name" or "name:key=val,key=val". Known names:
/// discs3d, ellipses, epigraph (a, b, y=halfplane|line), eq_ellipsoids,
/// socp, sdp (n, r, seed, spread), fixed_trace (n, a, r, seed, spread).
template <class R> CatalogEntry<R> resolve_problem(const std::string& spec);

std::vector<std::string> catalog_names();

#define CCRM_EXTERN_PROBLEMS(R)                                                                              \
  extern template CatalogEntry<R> make_discs3d<R>();                                                         \
  extern template CatalogEntry<R> make_ellipses<R>();                                                        \
  extern template CatalogEntry<R> make_epigraph<R>(double, double, LineVariant);                             \
  extern template CatalogEntry<R> make_eq_constrained_ellipsoids<R>(const Matrix&, const Vector&,            \
                                                                    const EllipsoidSpec&, const EllipsoidSpec&); \
  extern template CatalogEntry<R> make_socp<R>(const Matrix&, const Vector&, const Matrix&, const Vector&,   \
                                               const Vector&, double);                                       \
  extern template CatalogEntry<R> make_sdp_feasibility<R>(const std::vector<Matrix>&, const Vector&,         \
                                                          const Matrix&, double);                            \
  extern template CatalogEntry<R> make_fixed_trace<R>(double, const Matrix&, double);                        \
  extern template CatalogEntry<R> resolve_problem<R>(const std::string&);
CCRM_EXTERN_PROBLEMS(double)
CCRM_EXTERN_PROBLEMS(Quad)
#undef CCRM_EXTERN_PROBLEMS

}  // namespace ccrm
