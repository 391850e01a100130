#pragma once

#include "ccrm/types.hpp"

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace ccrm {

enum class SetKind {
  halfspace,
  hyperplane,
  affine_subspace,
  ball,
  ellipsoid,
  second_order_cone,
  power_epigraph,
  psd_cone,
  spectral_box_trace,
  ball_in_affine,
  dykstra_intersection,
  hull_coordinates,
};

std::string_view kind_name(SetKind kind);
/// Accepts the canonical names plus "frobenius_ball_in_L" for ball_in_affine.
SetKind kind_from_name(std::string_view name);

/// {z : A z = b} with A of full row rank, stored together with an orthonormal
/// basis of its direction space and one anchor point.
template <class R> class AffineSubspace {
 public:
  /// Throws InputError when A is rank deficient or the system is inconsistent.
  static AffineSubspace from_equations(const Mat<R>& A, const Vec<R>& b);
  static AffineSubspace whole_space(Index n);

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Mat<R>& A() const { return A_; }
  const Vec<R>& b() const { return b_; }
  const Mat<R>& basis() const { return basis_; }
  const Vec<R>& anchor() const { return anchor_; }

  Vec<R> project(const Vec<R>& z) const;
  /// Hull coordinates B^T (z - anchor); an isometry on the subspace.
  Vec<R> to_coords(const Vec<R>& z) const;
  Vec<R> from_coords(const Vec<R>& y) const;
  R residual(const Vec<R>& z) const;

 private:
  Mat<R> A_;
  Vec<R> b_;
  Mat<R> basis_;
  Vec<R> anchor_;
  Mat<R> normals_;  // orthonormal basis of row(A)
  Vec<R> offsets_;  // normals^T z = offsets on the subspace
};

template <class R> Vec<R> project_affine(const AffineSubspace<R>& L, const Vec<R>& z) { return L.project(z); }

/// Value, gradient and Hessian of a local defining function g with
/// set = {g <= 0} and relative boundary = {g = 0}.
template <class R> struct BoundaryJet {
  R g;
  Vec<R> grad;
  Mat<R> hess;
};

/// Closed convex set with exact projection. Immutable after construction.
template <class R> class ConvexSet {
 public:
  virtual ~ConvexSet() = default;

  virtual SetKind kind() const = 0;
  virtual Index dim() const = 0;
  virtual Vec<R> project(const Vec<R>& z) const = 0;

  virtual bool has_boundary_chart() const { return false; }
  /// g and its derivatives in ambient coordinates. Throws UnsupportedError
  /// when the set has no chart, RegularityError at nonsmooth points.
  virtual BoundaryJet<R> ambient_jet(const Vec<R>& z) const;

  /// nullopt means the set is full-dimensional.
  const std::optional<AffineSubspace<R>>& affine_hull() const { return hull_; }

 protected:
  explicit ConvexSet(std::optional<AffineSubspace<R>> hull = std::nullopt) : hull_(std::move(hull)) {}
  std::optional<AffineSubspace<R>> hull_;
};

template <class R> using SetPtr = std::shared_ptr<const ConvexSet<R>>;

// Checked entry points. All validate dimension and finiteness of z.
template <class R> Vec<R> project(const ConvexSet<R>& set, const Vec<R>& z);
template <class R> Vec<R> reflect(const ConvexSet<R>& set, const Vec<R>& z);
template <class R> R distance(const ConvexSet<R>& set, const Vec<R>& z);
template <class R> bool contains(const ConvexSet<R>& set, const Vec<R>& z, const R& tol);

/// Boundary jet restricted to the set's affine hull: gradient and Hessian are
/// expressed in the hull's orthonormal basis coordinates when a hull exists.
template <class R> BoundaryJet<R> boundary_eval(const ConvexSet<R>& set, const Vec<R>& z);

// ---------------------------------------------------------------------------
// Set kinds

/// {z : <a, z> <= beta}
template <class R> class Halfspace final : public ConvexSet<R> {
 public:
  Halfspace(Vec<R> normal, R offset);
  SetKind kind() const override { return SetKind::halfspace; }
  Index dim() const override { return normal_.size(); }
  Vec<R> project(const Vec<R>& z) const override;
  bool has_boundary_chart() const override { return true; }
  BoundaryJet<R> ambient_jet(const Vec<R>& z) const override;
  const Vec<R>& normal() const { return normal_; }
  const R& offset() const { return offset_; }

 private:
  Vec<R> normal_;
  R offset_;
};

/// {z : <a, z> = beta}
template <class R> class Hyperplane final : public ConvexSet<R> {
 public:
  Hyperplane(Vec<R> normal, R offset);
  SetKind kind() const override { return SetKind::hyperplane; }
  Index dim() const override { return normal_.size(); }
  Vec<R> project(const Vec<R>& z) const override;
  const Vec<R>& normal() const { return normal_; }
  const R& offset() const { return offset_; }

 private:
  Vec<R> normal_;
  R offset_;
};

template <class R> class AffineSet final : public ConvexSet<R> {
 public:
  explicit AffineSet(AffineSubspace<R> subspace);
  SetKind kind() const override { return SetKind::affine_subspace; }
  Index dim() const override { return this->hull_->ambient_dim(); }
  Vec<R> project(const Vec<R>& z) const override { return this->hull_->project(z); }
  const AffineSubspace<R>& subspace() const { return *this->hull_; }
};

template <class R> class Ball final : public ConvexSet<R> {
 public:
  Ball(Vec<R> center, R radius);
  SetKind kind() const override { return SetKind::ball; }
  Index dim() const override { return center_.size(); }
  Vec<R> project(const Vec<R>& z) const override;
  bool has_boundary_chart() const override { return true; }
  BoundaryJet<R> ambient_jet(const Vec<R>& z) const override;
  const Vec<R>& center() const { return center_; }
  const R& radius() const { return radius_; }

 private:
  Vec<R> center_;
  R radius_;
};

/// Ball(center, radius) intersected with an affine subspace. Projection is
/// closed form: project onto the subspace, then clamp radially around the
/// projected center.
template <class R> class BallInAffine final : public ConvexSet<R> {
 public:
  BallInAffine(Vec<R> center, R radius, AffineSubspace<R> hull);
  SetKind kind() const override { return SetKind::ball_in_affine; }
  Index dim() const override { return center_.size(); }
  Vec<R> project(const Vec<R>& z) const override;
  bool has_boundary_chart() const override { return true; }
  BoundaryJet<R> ambient_jet(const Vec<R>& z) const override;
  const Vec<R>& center() const { return center_; }
  const R& radius() const { return radius_; }
  const Vec<R>& slice_center() const { return slice_center_; }
  const R& slice_radius() const { return slice_radius_; }

 private:
  Vec<R> center_;
  R radius_;
  Vec<R> slice_center_;
  R slice_radius_;
};

/// {z : (z - c)^T Q (z - c) <= 1}, optionally sliced by an affine subspace.
/// With a hull the projection is computed exactly in hull coordinates, where
/// the slice is again an ellipsoid.
template <class R> class Ellipsoid final : public ConvexSet<R> {
 public:
  Ellipsoid(Mat<R> shape, Vec<R> center, std::optional<AffineSubspace<R>> hull = std::nullopt);
  SetKind kind() const override { return SetKind::ellipsoid; }
  Index dim() const override { return center_.size(); }
  Vec<R> project(const Vec<R>& z) const override;
  bool has_boundary_chart() const override { return true; }
  BoundaryJet<R> ambient_jet(const Vec<R>& z) const override;
  const Mat<R>& shape() const { return shape_; }
  const Vec<R>& center() const { return center_; }

 private:
  Mat<R> shape_;
  Vec<R> center_;
  // Working ellipsoid (in hull coordinates when sliced): eigenbasis of the
  // normalized shape matrix and the center.
  Mat<R> eigvecs_;
  Vec<R> eigvals_;
  Vec<R> work_center_;
};

/// Projection onto {z : (z - c)^T Q (z - c) <= 1}: dual Newton on the
/// Lagrange multiplier with a bisection safeguard.
template <class R> Vec<R> project_ellipsoid(const Mat<R>& Q, const Vec<R>& c, const Vec<R>& z);

/// Projection onto K = {(t, u) : ||u|| <= t}.
template <class R> Vec<R> project_soc(const Vec<R>& w);

/// {z : C z + d in K} for orthogonal C (identity and zero by default).
template <class R> class SecondOrderCone final : public ConvexSet<R> {
 public:
  explicit SecondOrderCone(Index n);
  SecondOrderCone(Mat<R> C, Vec<R> d);
  SetKind kind() const override { return SetKind::second_order_cone; }
  Index dim() const override { return d_.size(); }
  Vec<R> project(const Vec<R>& z) const override;
  bool has_boundary_chart() const override { return true; }
  BoundaryJet<R> ambient_jet(const Vec<R>& z) const override;
  const Mat<R>& C() const { return C_; }
  const Vec<R>& d() const { return d_; }

 private:
  Mat<R> C_;
  Vec<R> d_;
};

/// Positive root u of  u + alpha u^{alpha-1} (u^alpha - y) = x  for x >= 0:
/// the abscissa of the projection of (x, y) onto {y >= |x|^alpha} when (x, y)
/// lies below the graph. Newton from min(x, 1) with bisection fallback.
template <class R> R power_epigraph_root(const R& alpha, const R& x, const R& y);

/// {(x, y) : y >= |x|^alpha - beta} in R^2.
template <class R> class PowerEpigraph final : public ConvexSet<R> {
 public:
  PowerEpigraph(R alpha, R beta);
  SetKind kind() const override { return SetKind::power_epigraph; }
  Index dim() const override { return 2; }
  Vec<R> project(const Vec<R>& z) const override;
  bool has_boundary_chart() const override { return true; }
  BoundaryJet<R> ambient_jet(const Vec<R>& z) const override;
  const R& alpha() const { return alpha_; }
  const R& beta() const { return beta_; }

 private:
  R alpha_;
  R beta_;
};

/// Positive semidefinite n x n matrices on the flattened coordinates.
template <class R> class PsdCone final : public ConvexSet<R> {
 public:
  explicit PsdCone(Index n);
  SetKind kind() const override { return SetKind::psd_cone; }
  Index dim() const override { return flat_dim_; }
  Vec<R> project(const Vec<R>& z) const override;
  bool has_boundary_chart() const override { return true; }
  /// g = -lambda_min; requires a simple smallest eigenvalue.
  BoundaryJet<R> ambient_jet(const Vec<R>& z) const override;
  Index side() const { return n_; }

 private:
  Index n_;
  Index flat_dim_;
};

/// Projection of a symmetric matrix onto {lambda_max <= a, tr = 1}.
/// Throws InputError when a * n < 1.
template <class R> Mat<R> project_spectral_box_trace(const R& a, const Mat<R>& sigma);

/// Projection of a vector onto {v : v_i <= a, sum v = 1} (exact breakpoint
/// search on the shift multiplier).
template <class R> Vec<R> project_capped_simplex(const R& a, const Vec<R>& lambda);

/// {Sigma : lambda_max(Sigma) <= a, tr(Sigma) = 1} on flattened coordinates;
/// affine hull {tr = 1}.
template <class R> class SpectralBoxTrace final : public ConvexSet<R> {
 public:
  SpectralBoxTrace(Index n, R bound);
  SetKind kind() const override { return SetKind::spectral_box_trace; }
  Index dim() const override { return sym_dim_; }
  Vec<R> project(const Vec<R>& z) const override;
  bool has_boundary_chart() const override { return true; }
  /// g = lambda_max - a; requires a simple leading eigenvalue.
  BoundaryJet<R> ambient_jet(const Vec<R>& z) const override;
  Index side() const { return n_; }
  const R& bound() const { return bound_; }

 private:
  Index n_;
  Index sym_dim_;
  R bound_;
};

/// Cyclic Dykstra projection onto the intersection of the given sets. Stops
/// when every intermediate point of a full cycle moved by at most tol.
/// Throws ConvergenceError after max_iter cycles.
template <class R>
Vec<R> dykstra_project(const std::vector<SetPtr<R>>& sets, const Vec<R>& z, const R& tol, int max_iter);

template <class R> class DykstraIntersection final : public ConvexSet<R> {
 public:
  /// `boundary_from`, when set, names the component whose chart describes the
  /// relative boundary of the intersection within `hull`.
  DykstraIntersection(std::vector<SetPtr<R>> sets, R tol, int max_iter,
                      std::optional<AffineSubspace<R>> hull = std::nullopt,
                      std::optional<std::size_t> boundary_from = std::nullopt);
  SetKind kind() const override { return SetKind::dykstra_intersection; }
  Index dim() const override { return sets_.front()->dim(); }
  Vec<R> project(const Vec<R>& z) const override;
  bool has_boundary_chart() const override;
  BoundaryJet<R> ambient_jet(const Vec<R>& z) const override;
  const std::vector<SetPtr<R>>& sets() const { return sets_; }
  const R& tol() const { return tol_; }
  int max_iter() const { return max_iter_; }
  std::optional<std::size_t> boundary_from() const { return boundary_from_; }

 private:
  std::vector<SetPtr<R>> sets_;
  R tol_;
  int max_iter_;
  std::optional<std::size_t> boundary_from_;
};

/// A set contained in an affine subspace L, viewed in the orthonormal hull
/// coordinates of L (an isometric copy in R^dim(L)).
template <class R> class HullCoordinates final : public ConvexSet<R> {
 public:
  HullCoordinates(SetPtr<R> inner, AffineSubspace<R> hull);
  SetKind kind() const override { return SetKind::hull_coordinates; }
  Index dim() const override { return chart_.dim(); }
  Vec<R> project(const Vec<R>& y) const override;
  bool has_boundary_chart() const override { return inner_->has_boundary_chart(); }
  BoundaryJet<R> ambient_jet(const Vec<R>& y) const override;

 private:
  SetPtr<R> inner_;
  AffineSubspace<R> chart_;
};

#define CCRM_EXTERN_SETS(R)                                                                   \
  extern template class AffineSubspace<R>;                                                    \
  extern template class ConvexSet<R>;                                                         \
  extern template class Halfspace<R>;                                                         \
  extern template class Hyperplane<R>;                                                        \
  extern template class AffineSet<R>;                                                         \
  extern template class Ball<R>;                                                              \
  extern template class BallInAffine<R>;                                                      \
  extern template class Ellipsoid<R>;                                                         \
  extern template class SecondOrderCone<R>;                                                   \
  extern template class PowerEpigraph<R>;                                                     \
  extern template class PsdCone<R>;                                                           \
  extern template class SpectralBoxTrace<R>;                                                  \
  extern template class DykstraIntersection<R>;                                               \
  extern template class HullCoordinates<R>;                                                   \
  extern template Vec<R> project<R>(const ConvexSet<R>&, const Vec<R>&);                      \
  extern template Vec<R> reflect<R>(const ConvexSet<R>&, const Vec<R>&);                      \
  extern template R distance<R>(const ConvexSet<R>&, const Vec<R>&);                          \
  extern template bool contains<R>(const ConvexSet<R>&, const Vec<R>&, const R&);             \
  extern template BoundaryJet<R> boundary_eval<R>(const ConvexSet<R>&, const Vec<R>&);        \
  extern template Vec<R> project_ellipsoid<R>(const Mat<R>&, const Vec<R>&, const Vec<R>&);   \
  extern template Vec<R> project_soc<R>(const Vec<R>&);                                       \
  extern template R power_epigraph_root<R>(const R&, const R&, const R&);                     \
  extern template Mat<R> project_spectral_box_trace<R>(const R&, const Mat<R>&);              \
  extern template Vec<R> project_capped_simplex<R>(const R&, const Vec<R>&);                  \
  extern template Vec<R> dykstra_project<R>(const std::vector<SetPtr<R>>&, const Vec<R>&, const R&, int);
CCRM_EXTERN_SETS(double)
CCRM_EXTERN_SETS(Quad)
#undef CCRM_EXTERN_SETS

}  // namespace ccrm
