#include "ccrm/problems.hpp"

#include "ccrm/linalg.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace ccrm {

namespace {

template <class R> Vec<R> vec(std::initializer_list<double> xs) {
  Vec<R> v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = R(x);
  return v;
}

template <class R> AffineSubspace<R> plane_z3_zero() {
  Mat<R> A = Mat<R>::Zero(1, 3);
  A(0, 2) = R(1);
  return AffineSubspace<R>::from_equations(A, Vec<R>::Zero(1));
}

Expectation linear(std::optional<double> c = std::nullopt) { return {ExpectedRate::linear, c}; }

// Start on the far side of the centre of Y as seen from X, pushed sideways by
// a fixed pseudo-random direction within the hull so that the run does not
// stay on a symmetry line.
template <class R>
Vec<R> start_beyond(const ConvexSet<R>& X, const Vec<R>& c, const std::optional<AffineSubspace<R>>& hull) {
  const Vec<R> gap = c - X.project(c);
  const Index n = c.size();
  const Mat<R> basis = hull ? hull->basis() : Mat<R>::Identity(n, n);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  Vec<R> g(basis.cols());
  for (Index i = 0; i < g.size(); ++i) g[i] = R(gauss(rng));
  Vec<R> side = basis * g;
  if (gap.norm() > R(0)) side -= (side.dot(gap) / gap.squaredNorm()) * gap;
  if (side.norm() > R(0)) side *= gap.norm() / side.norm();
  return c + gap + side;
}

template <class R> void probe_common_point(CatalogEntry<R>& entry) {
  const std::vector<SetPtr<R>> both{entry.problem.X, entry.problem.Y};
  try {
    const Vec<R> p = dykstra_project<R>(both, entry.z0, R(1e-12), 100000);
    const R gap = std::max(distance(*entry.problem.X, p), distance(*entry.problem.Y, p));
    if (gap > R(1e-8)) entry.warnings.push_back("probe found no common point (gap " + std::to_string(to_double(gap)) + ")");
  } catch (const ConvergenceError& e) {
    entry.warnings.push_back(std::string("probe did not converge: ") + e.what());
  }
}

}  // namespace

template <class R> CatalogEntry<R> make_discs3d() {
  using std::sqrt;
  const R s15 = sqrt(R(15));
  const AffineSubspace<R> L = plane_z3_zero<R>();
  CatalogEntry<R> e;
  e.name = "discs3d";
  Vec<R> c2 = Vec<R>::Zero(3);
  c2[0] = s15;
  e.problem.X = std::make_shared<BallInAffine<R>>(Vec<R>::Zero(3), R(2), L);
  e.problem.Y = std::make_shared<BallInAffine<R>>(c2, R(2), L);
  e.problem.common_hull = L;
  Vec<R> ref(3);
  ref << s15 / R(2), R(1) / R(2), R(0);
  e.problem.reference = ref;
  // Error-bound constant at the corner: both set distances grow like t/4 along e_y.
  e.problem.constants = KnownConstants{0.5, 0.5, 0.25};
  e.z0.resize(3);
  e.z0 << s15 / R(2), R(4), R(1) / R(2);
  e.expected[Method::ccrm] = {ExpectedRate::quadratic, std::nullopt};
  e.expected[Method::map] = linear();
  return e;
}

template <class R> CatalogEntry<R> make_ellipses() {
  const AffineSubspace<R> L = plane_z3_zero<R>();
  CatalogEntry<R> e;
  e.name = "ellipses";
  Mat<R> Qx = Mat<R>::Identity(3, 3);
  Qx(0, 0) = R(1) / R(4);
  Mat<R> Qy = Mat<R>::Identity(3, 3);
  Qy(1, 1) = R(1) / R(4);
  e.problem.X = std::make_shared<Ellipsoid<R>>(Qx, Vec<R>::Zero(3), L);
  e.problem.Y = std::make_shared<Ellipsoid<R>>(Qy, vec<R>({1, 0, 0}), L);
  e.problem.common_hull = L;
  e.z0 = vec<R>({-0.4, 1.9, 0.5});
  return e;
}

double ellipse_curvature(double t) {
  const double s = std::sin(t), c = std::cos(t);
  return 2.0 / std::pow(4.0 * s * s + c * c, 1.5);
}

template <class R> CatalogEntry<R> make_epigraph(double alpha, double beta, LineVariant variant) {
  if (!(alpha > 1)) throw InputError("epigraph: exponent must exceed 1");
  if (!(beta >= 0)) throw InputError("epigraph: shift must be nonnegative");
  CatalogEntry<R> e;
  std::ostringstream name;
  name << "epigraph:a=" << alpha << ",b=" << beta << ",y=" << (variant == LineVariant::line ? "line" : "halfplane");
  e.name = name.str();
  e.problem.X = std::make_shared<PowerEpigraph<R>>(R(alpha), R(beta));
  const Vec<R> up = vec<R>({0, 1});
  if (variant == LineVariant::line) {
    e.problem.Y = std::make_shared<Hyperplane<R>>(up, R(0));
  } else {
    e.problem.Y = std::make_shared<Halfspace<R>>(up, R(0));
  }
  Vec<R> ref = Vec<R>::Zero(2);
  if (beta > 0) {
    using std::pow;
    ref[0] = pow(R(beta), R(1) / R(alpha));
    e.z0 = vec<R>({3, 0});
  } else {
    e.z0 = vec<R>({0.5, 0});
  }
  e.problem.reference = ref;

  const double c = 1.0 - 1.0 / alpha;
  if (beta == 0) {
    e.expected[Method::map] = {ExpectedRate::sublinear, std::nullopt};
    e.expected[Method::crm] = linear(c);
    e.expected[Method::ccrm] = linear(c);
  } else {
    e.expected[Method::map] = linear();
    e.expected[Method::crm] = {ExpectedRate::superlinear, std::nullopt};
    e.expected[Method::ccrm] = {alpha >= 2 ? ExpectedRate::quadratic : ExpectedRate::superlinear, std::nullopt};
  }
  return e;
}

template <class R>
CatalogEntry<R> make_eq_constrained_ellipsoids(const Matrix& A, const Vector& b, const EllipsoidSpec& first,
                                               const EllipsoidSpec& second) {
  const Index n = A.cols();
  for (const EllipsoidSpec* s : {&first, &second}) {
    if (s->B.cols() != n || s->c.size() != n) throw InputError("eq_ellipsoids: ellipsoid dimension differs from A");
    if (!(s->r > 0)) throw InputError("eq_ellipsoids: radius must be positive");
  }
  std::optional<AffineSubspace<R>> L;
  if (A.rows() > 0) L = AffineSubspace<R>::from_equations(from_double<R>(A), from_double<R>(b));
  auto shape = [](const EllipsoidSpec& s) { return Matrix(s.B.transpose() * s.B / (s.r * s.r)); };

  CatalogEntry<R> e;
  e.name = "eq_ellipsoids";
  e.problem.X = std::make_shared<Ellipsoid<R>>(from_double<R>(shape(first)), from_double<R>(first.c), L);
  e.problem.Y = std::make_shared<Ellipsoid<R>>(from_double<R>(shape(second)), from_double<R>(second.c), L);
  e.problem.common_hull = L;
  e.z0 = start_beyond(*e.problem.X, from_double<R>(second.c), L);
  e.expected[Method::ccrm] = {ExpectedRate::quadratic, std::nullopt};
  probe_common_point(e);
  return e;
}

template <class R>
CatalogEntry<R> make_socp(const Matrix& A, const Vector& b, const Matrix& C, const Vector& d, const Vector& ball_center,
                          double ball_radius) {
  CatalogEntry<R> e;
  e.name = "socp";
  auto cone = std::make_shared<SecondOrderCone<R>>(from_double<R>(C), from_double<R>(d));
  if (A.rows() == 0) {
    e.problem.X = cone;
    e.problem.Y = std::make_shared<Ball<R>>(from_double<R>(ball_center), R(ball_radius));
  } else {
    const AffineSubspace<R> L = AffineSubspace<R>::from_equations(from_double<R>(A), from_double<R>(b));
    std::vector<SetPtr<R>> parts{cone, std::make_shared<AffineSet<R>>(L)};
    e.problem.X = std::make_shared<DykstraIntersection<R>>(parts, Precision<R>::dykstra_tol() / R(100), 100000, L, std::size_t{0});
    e.problem.Y = std::make_shared<BallInAffine<R>>(from_double<R>(ball_center), R(ball_radius), L);
    e.problem.common_hull = L;
  }
  e.z0 = start_beyond(*e.problem.X, from_double<R>(ball_center), e.problem.common_hull);
  e.expected[Method::ccrm] = {ExpectedRate::quadratic, std::nullopt};
  probe_common_point(e);
  return e;
}

template <class R>
CatalogEntry<R> make_sdp_feasibility(const std::vector<Matrix>& constraints, const Vector& b, const Matrix& center,
                                     double radius) {
  const Index n = center.rows();
  if (center.cols() != n) throw InputError("sdp: center must be square");
  if (static_cast<Index>(constraints.size()) != b.size()) throw InputError("sdp: one right-hand side per constraint");
  const Index flat = sym_flat_dim(n);
  CatalogEntry<R> e;
  e.name = "sdp";
  auto cone = std::make_shared<PsdCone<R>>(n);
  const Vec<R> c = svec<R>(from_double<R>(center));
  if (constraints.empty()) {
    e.problem.X = cone;
    e.problem.Y = std::make_shared<Ball<R>>(c, R(radius));
  } else {
    Mat<R> A(static_cast<Index>(constraints.size()), flat);
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      if (constraints[i].rows() != n || constraints[i].cols() != n) throw InputError("sdp: constraint matrix size");
      A.row(static_cast<Index>(i)) = svec<R>(from_double<R>(constraints[i])).transpose();
    }
    const AffineSubspace<R> L = AffineSubspace<R>::from_equations(A, from_double<R>(b));
    std::vector<SetPtr<R>> parts{cone, std::make_shared<AffineSet<R>>(L)};
    e.problem.X = std::make_shared<DykstraIntersection<R>>(parts, Precision<R>::dykstra_tol() / R(100), 100000, L, std::size_t{0});
    e.problem.Y = std::make_shared<BallInAffine<R>>(c, R(radius), L);
    e.problem.common_hull = L;
  }
  e.z0 = start_beyond(*e.problem.X, c, e.problem.common_hull);
  e.expected[Method::ccrm] = {ExpectedRate::quadratic, std::nullopt};
  probe_common_point(e);
  return e;
}

template <class R> CatalogEntry<R> make_fixed_trace(double bound, const Matrix& center, double radius) {
  const Index n = center.rows();
  if (center.cols() != n) throw InputError("fixed_trace: center must be square");
  CatalogEntry<R> e;
  e.name = "fixed_trace";
  auto X = std::make_shared<SpectralBoxTrace<R>>(n, R(bound));
  const Vec<R> c = svec<R>(from_double<R>(center));
  e.problem.X = X;
  e.problem.Y = std::make_shared<BallInAffine<R>>(c, R(radius), *X->affine_hull());
  e.problem.common_hull = *X->affine_hull();
  e.z0 = start_beyond(*e.problem.X, c, e.problem.common_hull);
  e.expected[Method::ccrm] = {ExpectedRate::quadratic, std::nullopt};
  probe_common_point(e);
  return e;
}

Matrix seeded_trace_free(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Matrix M(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) M(i, j) = gauss(rng);
  Matrix S = (M + M.transpose()) / 2.0;
  S -= (S.trace() / static_cast<double>(n)) * Matrix::Identity(n, n);
  return S / S.norm();
}

// ---------------------------------------------------------------------------
// Name resolution

namespace {

class Params {
 public:
  Params(const std::string& name, const std::string& text) : name_(name) {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError(name + ": expected key=value, got '" + item + "'");
      values_[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }

  double number(const std::string& key, double fallback) {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::string text = it->second;
    values_.erase(it);
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw InputError(name_ + ": parameter " + key + " is not a number: '" + text + "'");
    }
  }

  std::string word(const std::string& key, const std::string& fallback) {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::string v = it->second;
    values_.erase(it);
    return v;
  }

  void finish() const {
    if (!values_.empty()) throw InputError(name_ + ": unknown parameter '" + values_.begin()->first + "'");
  }

 private:
  std::string name_;
  std::map<std::string, std::string> values_;
};

// r > 0 is used as given. Otherwise the radius is set just above the distance
// from the ball centre to X: the intersection is then a thin lens and the
// iterates approach one of its corners instead of landing inside after a step.
template <class R, class Build> CatalogEntry<R> with_thin_radius(double r, const Vector& center, Build build) {
  if (r < 0) throw InputError("radius must be positive");
  if (r > 0) return build(r);
  const Vec<R> c = from_double<R>(center);
  const double gap = to_double(R((c - build(1e6).problem.X->project(c)).norm()));
  if (!(gap > 0)) throw InputError("ball centre lies in X; pass r explicitly");
  return build(1.02 * gap);
}

Index side_param(Params& p, double fallback) {
  const double n = p.number("n", fallback);
  if (n < 1 || n > 50 || n != std::floor(n)) throw InputError("matrix side n must be an integer in [1, 50]");
  return static_cast<Index>(n);
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"discs3d", "ellipses", "epigraph", "eq_ellipsoids", "socp", "sdp", "fixed_trace"};
}

template <class R> CatalogEntry<R> resolve_problem(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  Params p(name, colon == std::string::npos ? std::string() : spec.substr(colon + 1));

  CatalogEntry<R> entry;
  if (name == "discs3d") {
    p.finish();
    entry = make_discs3d<R>();
  } else if (name == "ellipses") {
    p.finish();
    entry = make_ellipses<R>();
  } else if (name == "epigraph") {
    const double a = p.number("a", 2);
    const double b = p.number("b", 0);
    const std::string y = p.word("y", "halfplane");
    p.finish();
    if (y != "halfplane" && y != "line") throw InputError("epigraph: y must be halfplane or line");
    entry = make_epigraph<R>(a, b, y == "line" ? LineVariant::line : LineVariant::halfplane);
  } else if (name == "eq_ellipsoids") {
    const double r = p.number("r", 0);
    p.finish();
    Matrix A = Matrix::Ones(1, 4);
    Vector b = Vector::Constant(1, 2.0);
    EllipsoidSpec e1{Vector((Vector(4) << 1.0, 1.5, 1.0, 0.8).finished()).asDiagonal(),
                     Vector::Constant(4, 0.5), 1.0};
    const Vector c2 = (Vector(4) << 1.7, 0.1, 0.1, 0.1).finished();
    entry = with_thin_radius<R>(r, c2, [&](double radius) {
      return make_eq_constrained_ellipsoids<R>(A, b, e1, EllipsoidSpec{Matrix::Identity(4, 4), c2, radius});
    });
  } else if (name == "socp") {
    const double r = p.number("r", 0);
    p.finish();
    Matrix A = Matrix::Zero(1, 3);
    A(0, 2) = 1.0;
    const Vector c = (Vector(3) << 0.3, 1.5, 0.2).finished();
    entry = with_thin_radius<R>(r, c, [&](double radius) {
      return make_socp<R>(A, Vector::Constant(1, 0.2), Matrix::Identity(3, 3), Vector::Zero(3), c, radius);
    });
  } else if (name == "sdp") {
    const Index n = side_param(p, 3);
    const double r = p.number("r", 0);
    const double spread = p.number("spread", 0.7);
    const auto seed = static_cast<std::uint64_t>(p.number("seed", 7));
    p.finish();
    const Matrix center = Matrix::Identity(n, n) / static_cast<double>(n) + spread * seeded_trace_free(n, seed);
    entry = with_thin_radius<R>(r, svec<double>(center), [&](double radius) {
      return make_sdp_feasibility<R>({Matrix::Identity(n, n)}, Vector::Ones(1), center, radius);
    });
  } else if (name == "fixed_trace") {
    const Index n = side_param(p, 4);
    const double a = p.number("a", 0.4);
    const double r = p.number("r", 0);
    const double spread = p.number("spread", 0.4);
    const auto seed = static_cast<std::uint64_t>(p.number("seed", 1));
    p.finish();
    const Matrix center = Matrix::Identity(n, n) / static_cast<double>(n) + spread * seeded_trace_free(n, seed);
    entry = with_thin_radius<R>(r, svec<double>(center), [&](double radius) {
      return make_fixed_trace<R>(a, center, radius);
    });
  } else {
    throw InputError("unknown problem '" + name + "'");
  }
  if (colon != std::string::npos && name != "epigraph") entry.name = spec;
  return entry;
}

#define CCRM_INSTANTIATE_PROBLEMS(R)                                                                         \
  template CatalogEntry<R> make_discs3d<R>();                                                                \
  template CatalogEntry<R> make_ellipses<R>();                                                               \
  template CatalogEntry<R> make_epigraph<R>(double, double, LineVariant);                                    \
  template CatalogEntry<R> make_eq_constrained_ellipsoids<R>(const Matrix&, const Vector&,                   \
                                                             const EllipsoidSpec&, const EllipsoidSpec&);    \
  template CatalogEntry<R> make_socp<R>(const Matrix&, const Vector&, const Matrix&, const Vector&,          \
                                        const Vector&, double);                                              \
  template CatalogEntry<R> make_sdp_feasibility<R>(const std::vector<Matrix>&, const Vector&, const Matrix&, \
                                                   double);                                                  \
  template CatalogEntry<R> make_fixed_trace<R>(double, const Matrix&, double);                               \
  template CatalogEntry<R> resolve_problem<R>(const std::string&);
CCRM_INSTANTIATE_PROBLEMS(double)
CCRM_INSTANTIATE_PROBLEMS(Quad)

}  // namespace ccrm
