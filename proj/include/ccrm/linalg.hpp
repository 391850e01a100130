#pragma once

#include "ccrm/types.hpp"

namespace ccrm {

/// Eigendecomposition of a symmetric matrix. Eigenvalues ascending; the
/// columns of `vectors` are the matching orthonormal eigenvectors.
template <class R> struct SymEig {
  Vec<R> values;
  Mat<R> vectors;
};

/// Cyclic Jacobi eigensolver. Stops once the off-diagonal Frobenius norm
/// falls below Precision<R>::jacobi_off() * ||S||_F.
/// Throws InputError for non-square or asymmetric input.
template <class R> SymEig<R> symmetric_eigh(const Mat<R>& S);

template <class R> struct NullSpace {
  Mat<R> basis;  // n x (n - rank), orthonormal columns
  Index rank = 0;
};

/// Orthonormal basis of null(A). Singular values below
/// Precision<R>::rank() * sigma_max count as zero; the detected rank is
/// returned so callers can reject rank-deficient systems.
template <class R> NullSpace<R> orthonormal_nullspace(const Mat<R>& A);

/// Minimal-norm least-squares solution of A x = b.
template <class R> Vec<R> least_squares_min_norm(const Mat<R>& A, const Vec<R>& b);

// Isometric flattening of symmetric n x n matrices into R^{n(n+1)/2}:
// upper triangle row by row, off-diagonal entries scaled by sqrt(2), so the
// Frobenius inner product becomes the Euclidean one.
Index sym_flat_dim(Index n);
Index sym_side_from_flat(Index flat_dim);  // throws InputError if not triangular
template <class R> Vec<R> svec(const Mat<R>& S);
template <class R> Mat<R> smat(const Vec<R>& v);

#define CCRM_EXTERN_LINALG(R)                                                 \
  extern template SymEig<R> symmetric_eigh<R>(const Mat<R>&);                 \
  extern template NullSpace<R> orthonormal_nullspace<R>(const Mat<R>&);       \
  extern template Vec<R> least_squares_min_norm<R>(const Mat<R>&, const Vec<R>&); \
  extern template Vec<R> svec<R>(const Mat<R>&);                              \
  extern template Mat<R> smat<R>(const Vec<R>&);
CCRM_EXTERN_LINALG(double)
CCRM_EXTERN_LINALG(Quad)
#undef CCRM_EXTERN_LINALG

}  // namespace ccrm
