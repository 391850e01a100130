#include "ccrm/circumcenter.hpp"

#include "ccrm/linalg.hpp"

#include <algorithm>

namespace ccrm {

const char* status_name(CircumStatus status) {
  switch (status) {
    case CircumStatus::nondegenerate: return "nondegenerate";
    case CircumStatus::reduced_rank: return "reduced_rank";
    case CircumStatus::coincident_all: return "coincident_all";
  }
  return "unknown";
}

namespace {

// Circumcenter offset of {0, a, b} through the bivector a ^ b. Stays accurate
// when a and b are nearly parallel, where the 2x2 Gram solve loses digits.
template <class R> Vec<R> two_offset_center(const Vec<R>& a, const Vec<R>& b) {
  const Index n = a.size();
  const R aa = a.squaredNorm();
  const R bb = b.squaredNorm();
  const Vec<R> v = aa * b - bb * a;
  R wedge(0);
  Vec<R> s = Vec<R>::Zero(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const R m = a[i] * b[j] - a[j] * b[i];
      wedge += m * m;
      s[i] += m * v[j];
      s[j] -= m * v[i];
    }
  }
  const R floor = R(64) * Precision<R>::eps();
  if (wedge <= floor * floor * aa * bb) throw GeometryError("circumcenter: distinct collinear points have no circumcenter");
  return s / (R(2) * wedge);
}

// General case: offsets d_i, center c = sum s_i d_i with G s = diag(G) / 2.
template <class R> Vec<R> gram_center(const std::vector<Vec<R>>& d, bool& reduced) {
  using std::sqrt;
  const Index m = static_cast<Index>(d.size());
  Mat<R> D(d.front().size(), m);
  for (Index i = 0; i < m; ++i) D.col(i) = d[static_cast<std::size_t>(i)];
  const Mat<R> G = D.transpose() * D;
  const Vec<R> rhs = G.diagonal() / R(2);
  const NullSpace<R> ns = orthonormal_nullspace<R>(G);
  reduced = ns.rank < m;
  const Vec<R> s = least_squares_min_norm<R>(G, rhs);
  const R resid = (G * s - rhs).norm();
  if (resid > R(1e-9) * (R(1) + rhs.norm()))
    throw GeometryError("circumcenter: equidistance system is inconsistent after reduction");
  return D * s;
}

}  // namespace

template <class R> CircumResult<R> circumcenter_offsets(const Vec<R>& base, const std::vector<Vec<R>>& offsets) {
  if (!all_finite(base)) throw InputError("circumcenter: non-finite point");
  for (const auto& d : offsets) {
    if (d.size() != base.size()) throw InputError("circumcenter: points have different dimensions");
    if (!all_finite(d)) throw InputError("circumcenter: non-finite point");
  }

  R diameter(0);
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    diameter = std::max(diameter, R(offsets[i].norm()));
    for (std::size_t j = i + 1; j < offsets.size(); ++j)
      diameter = std::max(diameter, R((offsets[i] - offsets[j]).norm()));
  }
  if (diameter == R(0)) return {base, CircumStatus::coincident_all};

  const R tol = Precision<R>::dedup() * diameter;
  std::vector<Vec<R>> kept;
  for (const auto& d : offsets) {
    if (d.norm() <= tol) continue;
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Vec<R>& k) { return (d - k).norm() <= tol; });
    if (!dup) kept.push_back(d);
  }
  if (kept.empty()) return {base, CircumStatus::coincident_all};
  bool reduced = kept.size() < offsets.size();

  Vec<R> shift;
  if (kept.size() == 1) {
    shift = kept.front() / R(2);
  } else if (kept.size() == 2) {
    shift = two_offset_center<R>(kept[0], kept[1]);
  } else {
    bool rank_drop = false;
    shift = gram_center<R>(kept, rank_drop);
    reduced = reduced || rank_drop;
  }
  return {Vec<R>(base + shift), reduced ? CircumStatus::reduced_rank : CircumStatus::nondegenerate};
}

template <class R> CircumResult<R> circumcenter(const std::vector<Vec<R>>& points) {
  if (points.empty()) throw InputError("circumcenter: no points");
  std::vector<Vec<R>> offsets;
  offsets.reserve(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].size() != points[0].size()) throw InputError("circumcenter: points have different dimensions");
    offsets.push_back(points[i] - points[0]);
  }
  return circumcenter_offsets<R>(points[0], offsets);
}

template CircumResult<double> circumcenter<double>(const std::vector<Vector>&);
template CircumResult<Quad> circumcenter<Quad>(const std::vector<Vec<Quad>>&);
template CircumResult<double> circumcenter_offsets<double>(const Vector&, const std::vector<Vector>&);
template CircumResult<Quad> circumcenter_offsets<Quad>(const Vec<Quad>&, const std::vector<Vec<Quad>>&);

}  // namespace ccrm
