#include "ccrm/linalg.hpp"
#include "ccrm/problems.hpp"
#include "ccrm/solvers.hpp"
#include "ccrm/tables.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <functional>

using namespace ccrm;

namespace {

constexpr int cases = 1000;

struct NamedSet {
  std::string name;
  std::function<SetPtr<double>(std::mt19937_64&)> make;
  Index dim;
  double tol;  // slack for the inexact (iterative) projections
};

AffineSubspace<double> random_hull(std::mt19937_64& rng, Index rows, Index n) {
  Matrix A(rows, n);
  for (Index i = 0; i < rows; ++i) A.row(i) = oracle::gaussian(rng, n).transpose();
  return AffineSubspace<double>::from_equations(A, oracle::gaussian(rng, rows, 0.5));
}

Matrix random_spd(std::mt19937_64& rng, Index n) {
  Matrix B(n, n);
  for (Index i = 0; i < n; ++i) B.row(i) = oracle::gaussian(rng, n).transpose();
  return B.transpose() * B + 0.3 * Matrix::Identity(n, n);
}

std::vector<NamedSet> set_families() {
  return {
      {"ball", [](auto& rng) { return std::make_shared<Ball<double>>(oracle::gaussian(rng, 3), oracle::uniform(rng, 0.2, 2)); }, 3, 1e-12},
      {"halfspace", [](auto& rng) { return std::make_shared<Halfspace<double>>(oracle::gaussian(rng, 3), oracle::uniform(rng, -1, 1)); }, 3, 1e-12},
      {"ellipsoid", [](auto& rng) { return std::make_shared<Ellipsoid<double>>(random_spd(rng, 3), oracle::gaussian(rng, 3)); }, 3, 1e-10},
      {"sliced ellipsoid",
       [](auto& rng) {
         const AffineSubspace<double> L = random_hull(rng, 1, 4);
         const Vector c = L.project(oracle::gaussian(rng, 4, 0.3));
         return std::make_shared<Ellipsoid<double>>(random_spd(rng, 4), c, L);
       },
       4, 1e-10},
      {"second-order cone", [](auto&) { return std::make_shared<SecondOrderCone<double>>(4); }, 4, 1e-12},
      {"power epigraph",
       [](auto& rng) { return std::make_shared<PowerEpigraph<double>>(oracle::uniform(rng, 1.2, 4), oracle::uniform(rng, 0, 1)); },
       2, 1e-10},
      {"psd cone", [](auto&) { return std::make_shared<PsdCone<double>>(3); }, 6, 1e-11},
      {"spectral box", [](auto& rng) { return std::make_shared<SpectralBoxTrace<double>>(3, oracle::uniform(rng, 0.34, 1)); }, 6, 1e-11},
      {"ball in subspace",
       [](auto& rng) {
         const AffineSubspace<double> L = random_hull(rng, 2, 4);
         return std::make_shared<BallInAffine<double>>(L.project(oracle::gaussian(rng, 4)), oracle::uniform(rng, 0.3, 2), L);
       },
       4, 1e-12},
      {"dykstra ball cap",
       [](auto& rng) {
         const Vector c = oracle::gaussian(rng, 3, 0.3);
         std::vector<SetPtr<double>> parts{std::make_shared<Ball<double>>(c, 1.0),
                                           std::make_shared<Halfspace<double>>(oracle::gaussian(rng, 3).normalized(), 0.0)};
         return std::make_shared<DykstraIntersection<double>>(std::move(parts), 1e-14, 1000000);
       },
       3, 1e-9},
  };
}

// Two overlapping balls with a sampled common point.
struct BallPair {
  FeasibilityProblem<double> problem;
  Vector common;
};

BallPair random_ball_pair(std::mt19937_64& rng, Index n) {
  const double r1 = oracle::uniform(rng, 0.5, 2), r2 = oracle::uniform(rng, 0.5, 2);
  const Vector c1 = oracle::gaussian(rng, n);
  const Vector dir = oracle::gaussian(rng, n).normalized();
  const double gap = oracle::uniform(rng, std::abs(r1 - r2) + 0.05, r1 + r2 - 0.05);
  const Vector c2 = c1 + gap * dir;
  BallPair out;
  out.problem.X = std::make_shared<Ball<double>>(c1, r1);
  out.problem.Y = std::make_shared<Ball<double>>(c2, r2);
  // The lens contains the point on the center line between the two far sides.
  const double lo = std::max(-r1, gap - r2), hi = std::min(r1, gap + r2);
  out.common = c1 + oracle::uniform(rng, lo, hi) * dir;
  return out;
}

FeasibilityProblem<double> random_ellipse_pair(std::mt19937_64& rng) {
  FeasibilityProblem<double> p;
  const Matrix Q1 = Eigen::Vector2d(1 / std::pow(oracle::uniform(rng, 0.5, 2), 2), 1 / std::pow(oracle::uniform(rng, 0.5, 2), 2)).asDiagonal();
  const Matrix Q2 = random_spd(rng, 2);
  p.X = std::make_shared<Ellipsoid<double>>(Q1, Vector::Zero(2));
  // Y's center lies inside X (semi-axes of X are at least 0.5).
  Vector c2 = oracle::gaussian(rng, 2, 0.3);
  if (c2.norm() > 0.45) c2 *= 0.45 / c2.norm();
  p.Y = std::make_shared<Ellipsoid<double>>(Q2 / Q2.norm(), c2);
  return p;
}

// Discs in a random plane of R^4 that overlap in a lens.
FeasibilityProblem<double> random_discs_in_hull(std::mt19937_64& rng) {
  const AffineSubspace<double> L = random_hull(rng, 2, 4);
  const double r1 = oracle::uniform(rng, 0.5, 2), r2 = oracle::uniform(rng, 0.5, 2);
  const Vector c1 = L.project(oracle::gaussian(rng, 4));
  const Vector dir = L.basis() * oracle::gaussian(rng, 2).normalized();
  const Vector c2 = c1 + oracle::uniform(rng, std::abs(r1 - r2) + 0.05, r1 + r2 - 0.05) * dir;
  FeasibilityProblem<double> p;
  p.X = std::make_shared<BallInAffine<double>>(c1, r1, L);
  p.Y = std::make_shared<BallInAffine<double>>(c2, r2, L);
  p.common_hull = L;
  return p;
}

double residual(const AffineSubspace<double>& L, const Vector& z) { return (L.A() * z - L.b()).norm(); }

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("projections are nonexpansive, idempotent and obtuse") {
  std::mt19937_64 rng(1001);
  for (const NamedSet& fam : set_families()) {
    CAPTURE(fam.name);
    int bad_nonexp = 0, bad_idem = 0, bad_obtuse = 0;
    for (int c = 0; c < cases; ++c) {
      const SetPtr<double> S = fam.make(rng);
      const Vector x = oracle::gaussian(rng, fam.dim, 2.0), y = oracle::gaussian(rng, fam.dim, 2.0);
      const Vector px = project<double>(*S, x), py = project<double>(*S, y);
      const double scale = 1 + x.norm() + y.norm();
      if ((px - py).norm() > (x - y).norm() + fam.tol * scale) ++bad_nonexp;
      if ((project<double>(*S, px) - px).norm() > fam.tol * scale) ++bad_idem;
      if ((x - px).dot(py - px) > fam.tol * scale * scale) ++bad_obtuse;
    }
    CHECK(bad_nonexp == 0);
    CHECK(bad_idem == 0);
    CHECK(bad_obtuse == 0);
  }
}

TEST_CASE("cCRM step: Fejer decrease and monotone chain") {
  std::mt19937_64 rng(1002);
  int bad_fejer = 0, bad_chain = 0;
  for (int c = 0; c < cases; ++c) {
    const BallPair bp = random_ball_pair(rng, 3);
    const Vector z = oracle::gaussian(rng, 3, 3.0);
    const CcrmStep<double> step = ccrm_step(bp.problem, z);
    const Vector& s = bp.common;
    const double lhs = (step.next - s).squaredNorm();
    const double rhs = (z - s).squaredNorm() - (z - step.next).squaredNorm() / 8;
    if (lhs > rhs + 1e-9) ++bad_fejer;
    const double t = (step.next - s).norm(), zc = (step.centralized - s).norm();
    const double pm = (map_step(bp.problem, z) - s).norm(), z0 = (z - s).norm();
    if (t > zc + 1e-9 || zc > pm + 1e-9 || pm > z0 + 1e-9) ++bad_chain;
  }
  CHECK(bad_fejer == 0);
  CHECK(bad_chain == 0);
}

TEST_CASE("cCRM step equals the projection onto the two tangent hyperplanes") {
  std::mt19937_64 rng(1003);
  int checked = 0, bad = 0, attempts = 0;
  while (checked < cases && attempts < 200 * cases) {
    ++attempts;
    const bool discs = attempts % 2 == 0;
    const FeasibilityProblem<double> p = discs ? random_ball_pair(rng, 2).problem : random_ellipse_pair(rng);
    const Vector z = oracle::gaussian(rng, 2, 3.0);
    const CcrmStep<double> step = ccrm_step(p, z);
    const Vector& zc = step.centralized;
    const Vector px = project<double>(*p.X, zc), py = project<double>(*p.Y, zc);
    const Vector nx = zc - px, ny = zc - py;
    if (nx.norm() <= 1e-6 || ny.norm() <= 1e-6) continue;
    // Nearly parallel normals make the hyperplane intersection ill-posed.
    if (std::abs(nx.normalized().dot(ny.normalized())) > 1 - 1e-6) continue;
    Matrix N(2, 2);
    N.row(0) = nx.transpose();
    N.row(1) = ny.transpose();
    const Vector h = Eigen::Vector2d(nx.dot(px), ny.dot(py));
    const Vector ref = oracle::flat(zc, N, h);
    ++checked;
    if ((step.next - ref).norm() > 1e-8 * (1 + ref.norm())) ++bad;
  }
  CHECK(checked == cases);
  CHECK(bad == 0);
}

TEST_CASE("Fejer factor-two bound along whole cCRM runs") {
  std::mt19937_64 rng(1004);
  int bad = 0;
  std::size_t rows = 0;
  for (int c = 0; c < cases; ++c) {
    const BallPair bp = random_ball_pair(rng, 2);
    const SolveTrace<double> t = run(bp.problem, SolverConfig<double>{}, oracle::gaussian(rng, 2, 3.0));
    const std::vector<SetPtr<double>> both{bp.problem.X, bp.problem.Y};
    const FejerReport r = fejer_bound_check(t.iterates, t.iterates.back(), [&](const Vector& z) {
      return dykstra_project<double>(both, z, 1e-14, 10000000);
    });
    rows += r.checked;
    if (!r.passed) ++bad;
  }
  CHECK(bad == 0);
  CHECK(rows >= static_cast<std::size_t>(cases));
}

TEST_CASE("iterates stay in the common hull") {
  std::mt19937_64 rng(1005);
  int bad = 0;
  for (int c = 0; c < cases; ++c) {
    const FeasibilityProblem<double> p = random_discs_in_hull(rng);
    const Vector off = oracle::gaussian(rng, 4, 3.0);
    for (Method m : {Method::ccrm, Method::map}) {
      SolverConfig<double> cfg;
      cfg.method = m;
      cfg.max_iter = 200;
      const SolveTrace<double> t = run(p, cfg, off);
      for (std::size_t k = 1; k < t.size(); ++k)
        if (residual(*p.common_hull, t.iterates[k]) > 1e-9) ++bad;
    }
    // CRM: one step from a point of the hull stays in it. Whole runs are not
    // checked; CRM need not converge for two discs and near-collinear
    // triples amplify rounding off the hull.
    const Vector in = p.common_hull->project(off);
    const Vector next = crm_step(p, in).center;
    if (residual(*p.common_hull, next) > 1e-9 * (1 + next.norm())) ++bad;
  }
  CHECK(bad == 0);
}

TEST_CASE("CRM from outside the hull leaves it") {
  const CatalogEntry<double> e = make_discs3d<double>();
  SolverConfig<double> cfg;
  cfg.method = Method::crm;
  const SolveTrace<double> t = run(e.problem, cfg, e.z0);
  CHECK(residual(*e.problem.common_hull, t.iterates[1]) > 1e-3);
}

TEST_CASE("isometry reduction reproduces the trace") {
  std::mt19937_64 rng(1006);
  int bad = 0, short_runs = 0;
  for (int c = 0; c < cases; ++c) {
    const FeasibilityProblem<double> p = random_discs_in_hull(rng);
    const ReducedProblem<double> r = isometry_reduce(p);
    // Starts whose hull projection is already feasible give nothing to compare.
    Vector z0 = oracle::gaussian(rng, 4, 3.0);
    while (std::max(distance<double>(*p.X, r.to_ambient(r.to_reduced(z0))), distance<double>(*p.Y, r.to_ambient(r.to_reduced(z0)))) <= 1e-6)
      z0 = oracle::gaussian(rng, 4, 3.0);
    SolverConfig<double> cfg;
    cfg.max_iter = 200;
    const SolveTrace<double> full = run(p, cfg, z0);
    const SolveTrace<double> red = run(r.problem, cfg, r.to_reduced(z0));
    const std::size_t n = std::min(full.size(), red.size());
    if (n < 2) ++short_runs;
    if (std::max(full.size(), red.size()) > n + 1) ++bad;
    for (std::size_t k = 1; k < n; ++k)
      if ((r.to_ambient(red.iterates[k]) - full.iterates[k]).norm() > 1e-10) ++bad;
  }
  CHECK(bad == 0);
  CHECK(short_runs == 0);
}

TEST_CASE("halfplane and line variants give the same cCRM trace from the axis") {
  std::mt19937_64 rng(1007);
  int bad = 0, rows = 0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (int c = 0; c < cases; ++c) {
    const double alpha = oracle::uniform(rng, 1.1, 4.0);
    const double beta = c % 2 ? 0.0 : oracle::uniform(rng, 0.1, 1.0);
    const CatalogEntry<double> half = make_epigraph<double>(alpha, beta, LineVariant::halfplane);
    const CatalogEntry<double> line = make_epigraph<double>(alpha, beta, LineVariant::line);
    Vector z0(2);
    z0 << oracle::uniform(rng, 0.05, 3.0), 0.0;
    SolverConfig<double> cfg;
    cfg.tol_feas = epigraph_stop_tol(alpha, beta, eps, 1e-12);
    cfg.max_iter = 500;
    const SolveTrace<double> a = run(half.problem, cfg, z0);
    const SolveTrace<double> b = run(line.problem, cfg, z0);
    if (a.size() != b.size()) ++bad;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k, ++rows)
      if ((a.iterates[k] - b.iterates[k]).norm() > 1e-12) ++bad;
  }
  CHECK(bad == 0);
  CHECK(rows >= cases);
}

TEST_CASE("scalar and planar cCRM steps agree on the axis") {
  // Binary128: for alpha near 4 and small x the tangential part of the
  // projection, ~alpha x^(2 alpha - 1), falls below double resolution.
  std::mt19937_64 rng(1008);
  int bad = 0;
  for (int c = 0; c < cases; ++c) {
    const double alpha = oracle::uniform(rng, 1.01, 4.0), x = oracle::uniform(rng, 1e-3, 1.0);
    const CatalogEntry<Quad> e = make_epigraph<Quad>(alpha, 0, LineVariant::halfplane);
    Vec<Quad> z(2);
    z << Quad(x), Quad(0);
    const Vector planar = to_double(ccrm_step(e.problem, z).next);
    const double scalar = to_double(epigraph_scalar_step<Quad>(Quad(alpha), Quad(x)).next);
    if (std::abs(planar[0] - scalar) > 1e-10 || std::abs(planar[1]) > 1e-10) ++bad;
  }
  CHECK(bad == 0);
}

}  // TEST_SUITE
