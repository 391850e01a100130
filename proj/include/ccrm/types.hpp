#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ccrm {

using Index = Eigen::Index;

/// IEEE binary128 via libquadmath. Used where double precision runs out of
/// digits before an asymptotic rate becomes visible.
using Quad = boost::multiprecision::float128;

template <class R> using Vec = Eigen::Matrix<R, Eigen::Dynamic, 1>;
template <class R> using Mat = Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = Vec<double>;
using Matrix = Mat<double>;

// Error hierarchy. Every failure the library reports derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatch, empty sets, bad parameters.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An inner iteration (Dykstra, scalar root, dual Newton) did not converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (last residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// No equidistant point exists in the affine hull of the given points.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// The set does not support the requested operation (e.g. no boundary chart).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// The boundary is not a regular manifold at the requested point.
class RegularityError : public Error {
 public:
  using Error::Error;
};

/// Numerical tolerances per scalar type. The double values are the library
/// defaults; the quad values scale them to binary128 resolution.
template <class R> struct Precision;

template <> struct Precision<double> {
  static double eps() { return std::numeric_limits<double>::epsilon(); }
  static double jacobi_off() { return 1e-14; }
  static double rank() { return 1e-10; }
  static double dedup() { return 1e-12; }
  static double scalar_root() { return 1e-14; }
  static double dual_residual() { return 1e-12; }
  static double dykstra_tol() { return 1e-12; }
  static double tol_feas() { return 1e-12; }
  static double tol_step() { return 1e-15; }
};

template <> struct Precision<Quad> {
  static Quad eps() { return std::numeric_limits<Quad>::epsilon(); }
  static Quad jacobi_off() { return Quad(1e-31); }
  static Quad rank() { return Quad(1e-24); }
  static Quad dedup() { return Quad(1e-26); }
  static Quad scalar_root() { return Quad(1e-31); }
  static Quad dual_residual() { return Quad(1e-30); }
  static Quad dykstra_tol() { return Quad(1e-28); }
  static Quad tol_feas() { return Quad(1e-28); }
  static Quad tol_step() { return Quad(1e-32); }
};

inline double to_double(double x) { return x; }
inline double to_double(const Quad& x) { return static_cast<double>(x); }

template <class R> Vector to_double(const Vec<R>& v) {
  Vector out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

template <class R> Vec<R> from_double(const Vector& v) {
  Vec<R> out(v.size());
  for (Index i = 0; i < v.size(); ++i) out[i] = R(v[i]);
  return out;
}

template <class R> Mat<R> from_double(const Matrix& m) {
  Mat<R> out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out(i, j) = R(m(i, j));
  return out;
}

// x - x is NaN for both NaN and +-Inf.
template <class R> bool is_finite(const R& x) { return x - x == R(0); }

template <class R> bool all_finite(const Vec<R>& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (!is_finite(v[i])) return false;
  return true;
}

}  // namespace ccrm
