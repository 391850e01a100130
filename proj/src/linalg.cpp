#include "ccrm/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <numeric>
#include <vector>

namespace ccrm {

template <class R> SymEig<R> symmetric_eigh(const Mat<R>& S) {
  using std::abs;
  using std::sqrt;
  if (S.rows() != S.cols()) throw InputError("symmetric_eigh: matrix is not square");
  const Index n = S.rows();
  const R fro = S.norm();
  if ((S - S.transpose()).norm() > R(1e-12) * fro) throw InputError("symmetric_eigh: matrix is not symmetric");

  Mat<R> a = (S + S.transpose()) / R(2);
  Mat<R> v = Mat<R>::Identity(n, n);
  const R target = Precision<R>::jacobi_off() * fro;

  auto off_norm = [&] {
    R s(0);
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) s += R(2) * a(i, j) * a(i, j);
    return sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > target; ++sweep) {
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == R(0)) continue;
        // Rotation angle that annihilates a(p,q).
        const R theta = (a(q, q) - a(p, p)) / (R(2) * a(p, q));
        const R t = (theta >= R(0) ? R(1) : R(-1)) / (abs(theta) + sqrt(theta * theta + R(1)));
        const R c = R(1) / sqrt(t * t + R(1));
        const R s = t * c;
        for (Index k = 0; k < n; ++k) {
          const R akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const R apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const R vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) < a(j, j); });

  SymEig<R> out{Vec<R>(n), Mat<R>(n, n)};
  for (Index k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

namespace {

template <class R> Index numerical_rank(const Vec<R>& sigma) {
  if (sigma.size() == 0 || sigma[0] == R(0)) return 0;
  const R cut = Precision<R>::rank() * sigma[0];
  Index r = 0;
  while (r < sigma.size() && sigma[r] > cut) ++r;
  return r;
}

}  // namespace

template <class R> NullSpace<R> orthonormal_nullspace(const Mat<R>& A) {
  const Index n = A.cols();
  if (A.rows() == 0) return {Mat<R>::Identity(n, n), 0};
  Eigen::JacobiSVD<Mat<R>> svd(A, Eigen::ComputeFullV);
  const Index rank = numerical_rank<R>(svd.singularValues());
  return {svd.matrixV().rightCols(n - rank), rank};
}

template <class R> Vec<R> least_squares_min_norm(const Mat<R>& A, const Vec<R>& b) {
  if (A.rows() != b.size()) throw InputError("least_squares_min_norm: dimension mismatch");
  if (A.rows() == 0) return Vec<R>::Zero(A.cols());
  Eigen::JacobiSVD<Mat<R>> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index rank = numerical_rank<R>(svd.singularValues());
  Vec<R> coeff = svd.matrixU().leftCols(rank).transpose() * b;
  for (Index i = 0; i < rank; ++i) coeff[i] /= svd.singularValues()[i];
  return svd.matrixV().leftCols(rank) * coeff;
}

Index sym_flat_dim(Index n) { return n * (n + 1) / 2; }

Index sym_side_from_flat(Index flat_dim) {
  Index n = 0;
  while (sym_flat_dim(n) < flat_dim) ++n;
  if (sym_flat_dim(n) != flat_dim) throw InputError("flattened length is not n(n+1)/2");
  return n;
}

template <class R> Vec<R> svec(const Mat<R>& S) {
  using std::sqrt;
  if (S.rows() != S.cols()) throw InputError("svec: matrix is not square");
  const Index n = S.rows();
  const R root2 = sqrt(R(2));
  Vec<R> v(sym_flat_dim(n));
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) v[k++] = i == j ? S(i, i) : root2 * (S(i, j) + S(j, i)) / R(2);
  return v;
}

template <class R> Mat<R> smat(const Vec<R>& v) {
  using std::sqrt;
  const Index n = sym_side_from_flat(v.size());
  const R root2 = sqrt(R(2));
  Mat<R> S(n, n);
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      if (i == j) {
        S(i, i) = v[k++];
      } else {
        S(i, j) = S(j, i) = v[k++] / root2;
      }
    }
  return S;
}

#define CCRM_INSTANTIATE_LINALG(R)                                         \
  template SymEig<R> symmetric_eigh<R>(const Mat<R>&);                     \
  template NullSpace<R> orthonormal_nullspace<R>(const Mat<R>&);           \
  template Vec<R> least_squares_min_norm<R>(const Mat<R>&, const Vec<R>&); \
  template Vec<R> svec<R>(const Mat<R>&);                                  \
  template Mat<R> smat<R>(const Vec<R>&);
CCRM_INSTANTIATE_LINALG(double)
CCRM_INSTANTIATE_LINALG(Quad)

}  // namespace ccrm
