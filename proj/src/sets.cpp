#include "ccrm/sets.hpp"

#include "ccrm/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <numeric>
#include <utility>

namespace ccrm {

namespace {

constexpr std::array<std::pair<SetKind, std::string_view>, 12> kKindNames{{
    {SetKind::halfspace, "halfspace"},
    {SetKind::hyperplane, "hyperplane"},
    {SetKind::affine_subspace, "affine_subspace"},
    {SetKind::ball, "ball"},
    {SetKind::ellipsoid, "ellipsoid"},
    {SetKind::second_order_cone, "second_order_cone"},
    {SetKind::power_epigraph, "power_epigraph"},
    {SetKind::psd_cone, "psd_cone"},
    {SetKind::spectral_box_trace, "spectral_box_trace"},
    {SetKind::ball_in_affine, "ball_in_affine"},
    {SetKind::dykstra_intersection, "dykstra_intersection"},
    {SetKind::hull_coordinates, "hull_coordinates"},
}};

template <class R> void require_dim(const ConvexSet<R>& set, const Vec<R>& z, const char* what) {
  if (z.size() != set.dim())
    throw InputError(std::string(what) + ": point has dimension " + std::to_string(z.size()) + ", set has " +
                     std::to_string(set.dim()));
  if (!all_finite(z)) throw InputError(std::string(what) + ": point has non-finite entries");
}

template <class R> R sym_scale(const Vec<R>& values) {
  using std::abs;
  R s(1);
  for (Index i = 0; i < values.size(); ++i) s = std::max(s, R(abs(values[i])));
  return s;
}

// svec(sym(a b^T))
template <class R> Vec<R> sym_outer_flat(const Vec<R>& a, const Vec<R>& b) {
  const Mat<R> outer = a * b.transpose();
  return svec<R>((outer + outer.transpose()) / R(2));
}

// Gradient and Hessian (flattened coordinates) of the eigenvalue at position
// `which` of smat(z), assumed simple.
template <class R> BoundaryJet<R> eigenvalue_jet(const SymEig<R>& eig, Index which) {
  const Index n = eig.values.size();
  const Vec<R> vk = eig.vectors.col(which);
  BoundaryJet<R> jet{eig.values[which], sym_outer_flat<R>(vk, vk), Mat<R>::Zero(sym_flat_dim(n), sym_flat_dim(n))};
  for (Index j = 0; j < n; ++j) {
    if (j == which) continue;
    const Vec<R> f = sym_outer_flat<R>(vk, Vec<R>(eig.vectors.col(j)));
    jet.hess += R(2) * f * f.transpose() / (eig.values[which] - eig.values[j]);
  }
  return jet;
}

template <class R> void require_simple(const SymEig<R>& eig, Index which, const char* what) {
  using std::abs;
  const R gap_tol = R(1e-10) * sym_scale<R>(eig.values);
  for (Index j = 0; j < eig.values.size(); ++j)
    if (j != which && abs(eig.values[j] - eig.values[which]) <= gap_tol)
      throw RegularityError(std::string(what) + ": eigenvalue is not simple, boundary is not smooth here");
}

}  // namespace

std::string_view kind_name(SetKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

SetKind kind_from_name(std::string_view name) {
  if (name == "frobenius_ball_in_L") return SetKind::ball_in_affine;
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  throw InputError("unknown set kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// AffineSubspace

template <class R> AffineSubspace<R> AffineSubspace<R>::from_equations(const Mat<R>& A, const Vec<R>& b) {
  if (A.rows() != b.size()) throw InputError("affine subspace: A and b have different row counts");
  if (!all_finite(b)) throw InputError("affine subspace: b has non-finite entries");
  const Index n = A.cols();
  const Index m = A.rows();
  if (m == 0) return whole_space(n);
  if (m > n) throw InputError("affine subspace: more equations than unknowns");

  Eigen::JacobiSVD<Mat<R>> svd(A, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const Vec<R>& sigma = svd.singularValues();
  if (sigma[0] == R(0) || sigma[m - 1] <= Precision<R>::rank() * sigma[0])
    throw InputError("affine subspace: constraint matrix is rank deficient");

  AffineSubspace out;
  out.A_ = A;
  out.b_ = b;
  out.normals_ = svd.matrixV().leftCols(m);
  out.offsets_ = svd.matrixU().transpose() * b;
  for (Index i = 0; i < m; ++i) out.offsets_[i] /= sigma[i];
  out.basis_ = svd.matrixV().rightCols(n - m);
  out.anchor_ = out.normals_ * out.offsets_;
  return out;
}

template <class R> AffineSubspace<R> AffineSubspace<R>::whole_space(Index n) {
  AffineSubspace out;
  out.A_ = Mat<R>(0, n);
  out.b_ = Vec<R>(0);
  out.normals_ = Mat<R>(n, 0);
  out.offsets_ = Vec<R>(0);
  out.basis_ = Mat<R>::Identity(n, n);
  out.anchor_ = Vec<R>::Zero(n);
  return out;
}

template <class R> Vec<R> AffineSubspace<R>::project(const Vec<R>& z) const {
  if (z.size() != ambient_dim()) throw InputError("project_affine: dimension mismatch");
  return z - normals_ * (normals_.transpose() * z - offsets_);
}

template <class R> Vec<R> AffineSubspace<R>::to_coords(const Vec<R>& z) const {
  if (z.size() != ambient_dim()) throw InputError("hull coordinates: dimension mismatch");
  return basis_.transpose() * (z - anchor_);
}

template <class R> Vec<R> AffineSubspace<R>::from_coords(const Vec<R>& y) const {
  if (y.size() != dim()) throw InputError("hull coordinates: dimension mismatch");
  return anchor_ + basis_ * y;
}

template <class R> R AffineSubspace<R>::residual(const Vec<R>& z) const {
  if (A_.rows() == 0) return R(0);
  return (A_ * z - b_).norm();
}

// ---------------------------------------------------------------------------
// Generic entry points

template <class R> BoundaryJet<R> ConvexSet<R>::ambient_jet(const Vec<R>&) const {
  throw UnsupportedError(std::string(kind_name(kind())) + " has no boundary chart");
}

template <class R> Vec<R> project(const ConvexSet<R>& set, const Vec<R>& z) {
  require_dim(set, z, "project");
  return set.project(z);
}

template <class R> Vec<R> reflect(const ConvexSet<R>& set, const Vec<R>& z) {
  require_dim(set, z, "reflect");
  return R(2) * set.project(z) - z;
}

template <class R> R distance(const ConvexSet<R>& set, const Vec<R>& z) {
  require_dim(set, z, "distance");
  return (z - set.project(z)).norm();
}

template <class R> bool contains(const ConvexSet<R>& set, const Vec<R>& z, const R& tol) {
  return distance(set, z) <= tol;
}

template <class R> BoundaryJet<R> boundary_eval(const ConvexSet<R>& set, const Vec<R>& z) {
  if (!set.has_boundary_chart()) throw UnsupportedError(std::string(kind_name(set.kind())) + " has no boundary chart");
  require_dim(set, z, "boundary_eval");
  BoundaryJet<R> jet = set.ambient_jet(z);
  if (const auto& hull = set.affine_hull()) {
    const Mat<R>& B = hull->basis();
    jet.grad = B.transpose() * jet.grad;
    jet.hess = B.transpose() * jet.hess * B;
  }
  return jet;
}

// ---------------------------------------------------------------------------
// Halfspace / Hyperplane / AffineSet

template <class R> Halfspace<R>::Halfspace(Vec<R> normal, R offset) : normal_(std::move(normal)), offset_(offset) {
  if (!all_finite(normal_) || !is_finite(offset_)) throw InputError("halfspace: non-finite parameters");
  if (normal_.squaredNorm() == R(0)) throw InputError("halfspace: zero normal");
}

template <class R> Vec<R> Halfspace<R>::project(const Vec<R>& z) const {
  const R s = normal_.dot(z) - offset_;
  if (s <= R(0)) return z;
  return z - (s / normal_.squaredNorm()) * normal_;
}

template <class R> BoundaryJet<R> Halfspace<R>::ambient_jet(const Vec<R>& z) const {
  return {normal_.dot(z) - offset_, normal_, Mat<R>::Zero(dim(), dim())};
}

template <class R> Hyperplane<R>::Hyperplane(Vec<R> normal, R offset) : normal_(std::move(normal)), offset_(offset) {
  if (!all_finite(normal_) || !is_finite(offset_)) throw InputError("hyperplane: non-finite parameters");
  if (normal_.squaredNorm() == R(0)) throw InputError("hyperplane: zero normal");
  this->hull_ = AffineSubspace<R>::from_equations(Mat<R>(normal_.transpose()), Vec<R>::Constant(1, offset_));
}

template <class R> Vec<R> Hyperplane<R>::project(const Vec<R>& z) const {
  return z - ((normal_.dot(z) - offset_) / normal_.squaredNorm()) * normal_;
}

template <class R> AffineSet<R>::AffineSet(AffineSubspace<R> subspace) : ConvexSet<R>(std::move(subspace)) {}

// ---------------------------------------------------------------------------
// Balls

template <class R> Ball<R>::Ball(Vec<R> center, R radius) : center_(std::move(center)), radius_(radius) {
  if (!all_finite(center_) || !is_finite(radius_)) throw InputError("ball: non-finite parameters");
  if (!(radius_ > R(0))) throw InputError("ball: radius must be positive");
}

template <class R> Vec<R> Ball<R>::project(const Vec<R>& z) const {
  const Vec<R> d = z - center_;
  const R len = d.norm();
  if (len <= radius_) return z;
  return center_ + (radius_ / len) * d;
}

template <class R> BoundaryJet<R> Ball<R>::ambient_jet(const Vec<R>& z) const {
  const Vec<R> d = z - center_;
  return {d.squaredNorm() - radius_ * radius_, R(2) * d, R(2) * Mat<R>::Identity(dim(), dim())};
}

template <class R>
BallInAffine<R>::BallInAffine(Vec<R> center, R radius, AffineSubspace<R> hull)
    : ConvexSet<R>(std::move(hull)), center_(std::move(center)), radius_(radius) {
  using std::sqrt;
  if (!all_finite(center_) || !is_finite(radius_)) throw InputError("ball_in_affine: non-finite parameters");
  if (center_.size() != this->hull_->ambient_dim()) throw InputError("ball_in_affine: center and subspace dimensions differ");
  if (!(radius_ > R(0))) throw InputError("ball_in_affine: radius must be positive");
  slice_center_ = this->hull_->project(center_);
  const R r2 = radius_ * radius_ - (center_ - slice_center_).squaredNorm();
  if (!(r2 > R(0))) throw InputError("ball_in_affine: the ball does not meet the subspace in a nondegenerate slice");
  slice_radius_ = sqrt(r2);
}

template <class R> Vec<R> BallInAffine<R>::project(const Vec<R>& z) const {
  const Vec<R> p = this->hull_->project(z);
  const Vec<R> d = p - slice_center_;
  const R len = d.norm();
  if (len <= slice_radius_) return p;
  return slice_center_ + (slice_radius_ / len) * d;
}

template <class R> BoundaryJet<R> BallInAffine<R>::ambient_jet(const Vec<R>& z) const {
  const Vec<R> d = z - center_;
  return {d.squaredNorm() - radius_ * radius_, R(2) * d, R(2) * Mat<R>::Identity(dim(), dim())};
}

// ---------------------------------------------------------------------------
// Ellipsoid

template <class R>
Ellipsoid<R>::Ellipsoid(Mat<R> shape, Vec<R> center, std::optional<AffineSubspace<R>> hull)
    : ConvexSet<R>(std::move(hull)), shape_(std::move(shape)), center_(std::move(center)) {
  const Index n = center_.size();
  if (shape_.rows() != n || shape_.cols() != n) throw InputError("ellipsoid: shape matrix and center dimensions differ");
  if (!all_finite(center_)) throw InputError("ellipsoid: non-finite center");
  const SymEig<R> full = symmetric_eigh<R>(shape_);
  if (!(full.values[0] > R(0))) throw InputError("ellipsoid: shape matrix is not positive definite");

  if (!this->hull_) {
    eigvals_ = full.values;
    eigvecs_ = full.vectors;
    work_center_ = center_;
    return;
  }
  const AffineSubspace<R>& L = *this->hull_;
  if (L.ambient_dim() != n) throw InputError("ellipsoid: subspace dimension differs");
  // In hull coordinates y: (anchor + B y - c)^T Q (...) = (y - yc)^T Q' (y - yc) + 1 - rho.
  const Mat<R>& B = L.basis();
  const Mat<R> Qr = B.transpose() * shape_ * B;
  const Vec<R> e = L.anchor() - center_;
  const SymEig<R> red = symmetric_eigh<R>(Mat<R>((Qr + Qr.transpose()) / R(2)));
  const Vec<R> rhs = B.transpose() * (shape_ * e);
  Vec<R> coeff = red.vectors.transpose() * rhs;
  for (Index i = 0; i < coeff.size(); ++i) coeff[i] /= red.values[i];
  const Vec<R> yc = -(red.vectors * coeff);
  const R rho = R(1) - (e.dot(shape_ * e) - yc.dot(Qr * yc));
  if (!(rho > R(0))) throw InputError("ellipsoid: the slice by the subspace is empty or a single point");
  eigvals_ = red.values / rho;
  eigvecs_ = red.vectors;
  work_center_ = yc;
}

namespace {

// Projection of w onto {x : sum lambda_i x_i^2 <= 1} with lambda > 0, in the eigenbasis.
template <class R> Vec<R> project_diag_ellipsoid(const Vec<R>& lambda, const Vec<R>& w) {
  using std::abs;
  using std::sqrt;
  R inside(0);
  for (Index i = 0; i < w.size(); ++i) inside += lambda[i] * w[i] * w[i];
  if (inside <= R(1)) return w;

  auto f = [&](const R& mu, R& df) {
    R val(-1);
    df = R(0);
    for (Index i = 0; i < w.size(); ++i) {
      const R q = R(1) + mu * lambda[i];
      const R t = lambda[i] * w[i] * w[i] / (q * q);
      val += t;
      df -= R(2) * t * lambda[i] / q;
    }
    return val;
  };

  R lo(0);
  R hi = w.norm() / sqrt(lambda.minCoeff());
  R mu(0);
  const R tol = Precision<R>::dual_residual();
  for (int it = 0; it < 500; ++it) {
    R df;
    const R val = f(mu, df);
    if (abs(val) <= tol || hi - lo <= Precision<R>::eps() * hi) {
      Vec<R> p(w.size());
      for (Index i = 0; i < w.size(); ++i) p[i] = w[i] / (R(1) + mu * lambda[i]);
      return p;
    }
    if (val > R(0)) {
      lo = mu;
    } else {
      hi = mu;
    }
    R next = mu - val / df;
    if (!(next > lo && next < hi)) next = (lo + hi) / R(2);
    mu = next;
  }
  R df;
  throw ConvergenceError("ellipsoid projection: multiplier search did not converge", to_double(f(mu, df)));
}

}  // namespace

template <class R> Vec<R> Ellipsoid<R>::project(const Vec<R>& z) const {
  const Vec<R> y = this->hull_ ? this->hull_->to_coords(z) : z;
  const Vec<R> w = eigvecs_.transpose() * (y - work_center_);
  const Vec<R> p = work_center_ + eigvecs_ * project_diag_ellipsoid<R>(eigvals_, w);
  return this->hull_ ? this->hull_->from_coords(p) : p;
}

template <class R> BoundaryJet<R> Ellipsoid<R>::ambient_jet(const Vec<R>& z) const {
  const Vec<R> d = z - center_;
  const Vec<R> Qd = shape_ * d;
  return {d.dot(Qd) - R(1), R(2) * Qd, R(2) * shape_};
}

template <class R> Vec<R> project_ellipsoid(const Mat<R>& Q, const Vec<R>& c, const Vec<R>& z) {
  const Ellipsoid<R> e(Q, c);
  return project<R>(e, z);
}

// ---------------------------------------------------------------------------
// Second-order cone

template <class R> Vec<R> project_soc(const Vec<R>& w) {
  if (w.size() < 2) throw InputError("project_soc: dimension must be at least 2");
  if (!all_finite(w)) throw InputError("project_soc: non-finite entries");
  const R t = w[0];
  const Vec<R> u = w.tail(w.size() - 1);
  const R nu = u.norm();
  if (nu <= t) return w;
  if (nu <= -t) return Vec<R>::Zero(w.size());
  const R s = (t + nu) / R(2);
  Vec<R> p(w.size());
  p[0] = s;
  p.tail(w.size() - 1) = (s / nu) * u;
  return p;
}

template <class R> SecondOrderCone<R>::SecondOrderCone(Index n) : C_(Mat<R>::Identity(n, n)), d_(Vec<R>::Zero(n)) {
  if (n < 2) throw InputError("second_order_cone: dimension must be at least 2");
}

template <class R> SecondOrderCone<R>::SecondOrderCone(Mat<R> C, Vec<R> d) : C_(std::move(C)), d_(std::move(d)) {
  const Index n = d_.size();
  if (n < 2) throw InputError("second_order_cone: dimension must be at least 2");
  if (C_.rows() != n || C_.cols() != n) throw InputError("second_order_cone: C must be square and match d");
  if (!all_finite(d_)) throw InputError("second_order_cone: non-finite offset");
  if ((C_.transpose() * C_ - Mat<R>::Identity(n, n)).norm() > R(1e-10))
    throw InputError("second_order_cone: C must be orthogonal");
}

template <class R> Vec<R> SecondOrderCone<R>::project(const Vec<R>& z) const {
  return C_.transpose() * (project_soc<R>(Vec<R>(C_ * z + d_)) - d_);
}

template <class R> BoundaryJet<R> SecondOrderCone<R>::ambient_jet(const Vec<R>& z) const {
  using std::abs;
  const Index n = d_.size();
  const Vec<R> w = C_ * z + d_;
  const Vec<R> u = w.tail(n - 1);
  const R nu = u.norm();
  if (nu <= R(1e-12) * (R(1) + abs(w[0])))
    throw RegularityError("second_order_cone: the boundary is not a manifold at the apex");
  Vec<R> gw(n);
  gw[0] = R(-1);
  gw.tail(n - 1) = u / nu;
  Mat<R> hw = Mat<R>::Zero(n, n);
  const Vec<R> uh = u / nu;
  hw.bottomRightCorner(n - 1, n - 1) = (Mat<R>::Identity(n - 1, n - 1) - uh * uh.transpose()) / nu;
  return {nu - w[0], C_.transpose() * gw, C_.transpose() * hw * C_};
}

// ---------------------------------------------------------------------------
// Power epigraph

template <class R> R power_epigraph_root(const R& alpha, const R& x, const R& y) {
  using std::abs;
  using std::pow;
  using std::max;
  using std::min;
  if (!(alpha > R(1))) throw InputError("power_epigraph_root: exponent must exceed 1");
  if (x < R(0) || !is_finite(x) || !is_finite(y)) throw InputError("power_epigraph_root: need finite x >= 0");
  if (x == R(0)) return R(0);

  auto F = [&](const R& u) { return u - x + alpha * pow(u, alpha - R(1)) * (pow(u, alpha) - y); };
  auto dF = [&](const R& u) {
    return R(1) + alpha * (alpha - R(1)) * pow(u, alpha - R(2)) * (pow(u, alpha) - y) +
           alpha * alpha * pow(u, R(2) * alpha - R(2));
  };

  R lo = y > R(0) ? R(pow(y, R(1) / alpha)) : R(0);
  R hi = x;
  if (lo >= hi) return hi;
  R u = min(max(R(min(x, R(1))), lo), hi);
  const R tol = Precision<R>::scalar_root();
  for (int it = 0; it < 400; ++it) {
    const R val = F(u);
    if (val == R(0)) return u;
    if (val > R(0)) {
      hi = u;
    } else {
      lo = u;
    }
    R next;
    const R slope = u > R(0) ? dF(u) : R(0);
    if (slope > R(0) && is_finite(slope)) {
      next = u - val / slope;
      if (!(next > lo && next < hi)) next = (lo + hi) / R(2);
    } else {
      next = (lo + hi) / R(2);
    }
    const R step = abs(next - u);
    u = next;
    if (step <= tol * u || hi - lo <= Precision<R>::eps() * hi) {
      // One more Newton correction keeps the result at full precision.
      const R s = dF(u);
      if (s > R(0) && is_finite(s)) {
        const R polished = u - F(u) / s;
        if (polished >= lo && polished <= hi) u = polished;
      }
      return u;
    }
  }
  throw ConvergenceError("power_epigraph_root: no convergence", to_double(F(u)));
}

template <class R> PowerEpigraph<R>::PowerEpigraph(R alpha, R beta) : alpha_(alpha), beta_(beta) {
  if (!is_finite(alpha_) || !is_finite(beta_)) throw InputError("power_epigraph: non-finite parameters");
  if (!(alpha_ > R(1))) throw InputError("power_epigraph: exponent must exceed 1");
}

template <class R> Vec<R> PowerEpigraph<R>::project(const Vec<R>& z) const {
  using std::abs;
  using std::pow;
  const R x = z[0];
  const R ys = z[1] + beta_;
  const R ax = abs(x);
  if (ys >= pow(ax, alpha_)) return z;
  const R u = power_epigraph_root<R>(alpha_, ax, ys);
  Vec<R> p(2);
  p[0] = x < R(0) ? R(-u) : u;
  p[1] = pow(u, alpha_) - beta_;
  return p;
}

template <class R> BoundaryJet<R> PowerEpigraph<R>::ambient_jet(const Vec<R>& z) const {
  using std::abs;
  using std::pow;
  const R x = z[0];
  const R ax = abs(x);
  if (ax == R(0) && alpha_ < R(2))
    throw RegularityError("power_epigraph: boundary is not twice differentiable at x = 0");
  const R sgn = x < R(0) ? R(-1) : R(1);
  Vec<R> grad(2);
  grad[0] = alpha_ * sgn * pow(ax, alpha_ - R(1));
  grad[1] = R(-1);
  Mat<R> hess = Mat<R>::Zero(2, 2);
  hess(0, 0) = alpha_ * (alpha_ - R(1)) * pow(ax, alpha_ - R(2));
  return {pow(ax, alpha_) - beta_ - z[1], grad, hess};
}

// ---------------------------------------------------------------------------
// Matrix sets

template <class R> PsdCone<R>::PsdCone(Index n) : n_(n), flat_dim_(sym_flat_dim(n)) {
  if (n < 1) throw InputError("psd_cone: side must be positive");
}

template <class R> Vec<R> PsdCone<R>::project(const Vec<R>& z) const {
  const SymEig<R> eig = symmetric_eigh<R>(smat<R>(z));
  const Vec<R> clipped = eig.values.cwiseMax(R(0));
  return svec<R>(Mat<R>(eig.vectors * clipped.asDiagonal() * eig.vectors.transpose()));
}

template <class R> BoundaryJet<R> PsdCone<R>::ambient_jet(const Vec<R>& z) const {
  const SymEig<R> eig = symmetric_eigh<R>(smat<R>(z));
  require_simple(eig, 0, "psd_cone");
  BoundaryJet<R> jet = eigenvalue_jet(eig, 0);
  return {-jet.g, -jet.grad, -jet.hess};
}

template <class R> Vec<R> project_capped_simplex(const R& a, const Vec<R>& lambda) {
  const Index n = lambda.size();
  if (n == 0) throw InputError("capped simplex: empty vector");
  if (a * R(n) < R(1)) throw InputError("spectral_box_trace: empty set (a * n < 1)");
  // Entries with lambda_i - mu >= a are capped; capped entries are always the
  // largest ones. With the k largest capped, sum min(lambda_i - mu, a) = 1 fixes mu.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index i, Index j) { return lambda[i] > lambda[j]; });
  auto sorted = [&](Index k) { return lambda[order[static_cast<std::size_t>(k)]]; };

  R rest = lambda.sum();
  R mu(0);
  R best_violation(-1);
  for (Index k = 0; k < n; ++k) {
    if (k > 0) rest -= sorted(k - 1);
    const R cand = (rest - (R(1) - a * R(k))) / R(n - k);
    R violation = std::max(R(0), R(sorted(k) - cand - a));
    if (k > 0) violation = std::max(violation, R(a - (sorted(k - 1) - cand)));
    if (best_violation < R(0) || violation < best_violation) {
      best_violation = violation;
      mu = cand;
    }
    if (violation == R(0)) break;
  }
  Vec<R> v(n);
  for (Index i = 0; i < n; ++i) v[i] = std::min(R(lambda[i] - mu), a);
  return v;
}

template <class R> Mat<R> project_spectral_box_trace(const R& a, const Mat<R>& sigma) {
  const SymEig<R> eig = symmetric_eigh<R>(sigma);
  const Vec<R> v = project_capped_simplex<R>(a, eig.values);
  return eig.vectors * v.asDiagonal() * eig.vectors.transpose();
}

namespace {

template <class R> AffineSubspace<R> unit_trace_subspace(Index n) {
  Mat<R> A = Mat<R>::Zero(1, sym_flat_dim(n));
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j, ++k)
      if (i == j) A(0, k) = R(1);
  return AffineSubspace<R>::from_equations(A, Vec<R>::Constant(1, R(1)));
}

}  // namespace

template <class R>
SpectralBoxTrace<R>::SpectralBoxTrace(Index n, R bound)
    : ConvexSet<R>(unit_trace_subspace<R>(n)), n_(n), sym_dim_(sym_flat_dim(n)), bound_(bound) {
  if (!is_finite(bound_) || bound_ * R(n) < R(1)) throw InputError("spectral_box_trace: empty set (a * n < 1)");
}

template <class R> Vec<R> SpectralBoxTrace<R>::project(const Vec<R>& z) const {
  return svec<R>(project_spectral_box_trace<R>(bound_, smat<R>(z)));
}

template <class R> BoundaryJet<R> SpectralBoxTrace<R>::ambient_jet(const Vec<R>& z) const {
  const SymEig<R> eig = symmetric_eigh<R>(smat<R>(z));
  require_simple(eig, n_ - 1, "spectral_box_trace");
  BoundaryJet<R> jet = eigenvalue_jet(eig, n_ - 1);
  jet.g -= bound_;
  return jet;
}

// ---------------------------------------------------------------------------
// Dykstra

template <class R>
Vec<R> dykstra_project(const std::vector<SetPtr<R>>& sets, const Vec<R>& z, const R& tol, int max_iter) {
  if (sets.empty()) throw InputError("dykstra_project: no sets");
  for (const auto& s : sets)
    if (!s || s->dim() != z.size()) throw InputError("dykstra_project: set dimension mismatch");
  if (!all_finite(z)) throw InputError("dykstra_project: non-finite point");
  if (max_iter < 1) throw InputError("dykstra_project: max_iter must be positive");

  const std::size_t m = sets.size();
  std::vector<Vec<R>> increments(m, Vec<R>::Zero(z.size()));
  std::vector<Vec<R>> outputs(m, z);
  Vec<R> x = z;
  const R scale = R(1) + z.norm();
  R change(0);
  for (int cycle = 0; cycle < max_iter; ++cycle) {
    change = R(0);
    for (std::size_t i = 0; i < m; ++i) {
      const Vec<R> y = x + increments[i];
      x = sets[i]->project(y);
      increments[i] = y - x;
      change = std::max(change, R((x - outputs[i]).norm()));
      outputs[i] = x;
    }
    if (cycle > 0 && change <= tol * scale) return x;
    if (m == 1) return x;
  }
  throw ConvergenceError("dykstra_project: iteration cap reached", to_double(change));
}

template <class R>
DykstraIntersection<R>::DykstraIntersection(std::vector<SetPtr<R>> sets, R tol, int max_iter,
                                            std::optional<AffineSubspace<R>> hull,
                                            std::optional<std::size_t> boundary_from)
    : ConvexSet<R>(std::move(hull)), sets_(std::move(sets)), tol_(tol), max_iter_(max_iter),
      boundary_from_(boundary_from) {
  if (sets_.empty()) throw InputError("dykstra_intersection: no sets");
  for (const auto& s : sets_)
    if (!s || s->dim() != sets_.front()->dim()) throw InputError("dykstra_intersection: set dimensions differ");
  if (!(tol_ > R(0)) || max_iter_ < 1) throw InputError("dykstra_intersection: invalid tolerance or cap");
  if (boundary_from_ && *boundary_from_ >= sets_.size()) throw InputError("dykstra_intersection: bad boundary index");
}

template <class R> Vec<R> DykstraIntersection<R>::project(const Vec<R>& z) const {
  return dykstra_project<R>(sets_, z, tol_, max_iter_);
}

template <class R> bool DykstraIntersection<R>::has_boundary_chart() const {
  return boundary_from_ && sets_[*boundary_from_]->has_boundary_chart();
}

template <class R> BoundaryJet<R> DykstraIntersection<R>::ambient_jet(const Vec<R>& z) const {
  if (!has_boundary_chart()) throw UnsupportedError("dykstra_intersection: no boundary chart configured");
  return sets_[*boundary_from_]->ambient_jet(z);
}

// ---------------------------------------------------------------------------
// Hull coordinates

template <class R>
HullCoordinates<R>::HullCoordinates(SetPtr<R> inner, AffineSubspace<R> hull)
    : inner_(std::move(inner)), chart_(std::move(hull)) {
  if (!inner_) throw InputError("hull_coordinates: null set");
  if (inner_->dim() != chart_.ambient_dim()) throw InputError("hull_coordinates: dimension mismatch");
}

template <class R> Vec<R> HullCoordinates<R>::project(const Vec<R>& y) const {
  return chart_.to_coords(inner_->project(chart_.from_coords(y)));
}

template <class R> BoundaryJet<R> HullCoordinates<R>::ambient_jet(const Vec<R>& y) const {
  BoundaryJet<R> jet = inner_->ambient_jet(chart_.from_coords(y));
  const Mat<R>& B = chart_.basis();
  return {jet.g, B.transpose() * jet.grad, B.transpose() * jet.hess * B};
}

#define CCRM_INSTANTIATE_SETS(R)                                                               \
  template class AffineSubspace<R>;                                                            \
  template class ConvexSet<R>;                                                                 \
  template class Halfspace<R>;                                                                 \
  template class Hyperplane<R>;                                                                \
  template class AffineSet<R>;                                                                 \
  template class Ball<R>;                                                                      \
  template class BallInAffine<R>;                                                              \
  template class Ellipsoid<R>;                                                                 \
  template class SecondOrderCone<R>;                                                           \
  template class PowerEpigraph<R>;                                                             \
  template class PsdCone<R>;                                                                   \
  template class SpectralBoxTrace<R>;                                                          \
  template class DykstraIntersection<R>;                                                       \
  template class HullCoordinates<R>;                                                           \
  template Vec<R> project<R>(const ConvexSet<R>&, const Vec<R>&);                              \
  template Vec<R> reflect<R>(const ConvexSet<R>&, const Vec<R>&);                              \
  template R distance<R>(const ConvexSet<R>&, const Vec<R>&);                                  \
  template bool contains<R>(const ConvexSet<R>&, const Vec<R>&, const R&);                     \
  template BoundaryJet<R> boundary_eval<R>(const ConvexSet<R>&, const Vec<R>&);                \
  template Vec<R> project_ellipsoid<R>(const Mat<R>&, const Vec<R>&, const Vec<R>&);           \
  template Vec<R> project_soc<R>(const Vec<R>&);                                               \
  template R power_epigraph_root<R>(const R&, const R&, const R&);                             \
  template Mat<R> project_spectral_box_trace<R>(const R&, const Mat<R>&);                      \
  template Vec<R> project_capped_simplex<R>(const R&, const Vec<R>&);                          \
  template Vec<R> dykstra_project<R>(const std::vector<SetPtr<R>>&, const Vec<R>&, const R&, int);
CCRM_INSTANTIATE_SETS(double)
CCRM_INSTANTIATE_SETS(Quad)

}  // namespace ccrm
