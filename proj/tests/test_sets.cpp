#include "ccrm/linalg.hpp"
#include "ccrm/sets.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace ccrm;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

AffineSubspace<double> plane(std::initializer_list<double> normal, double offset) {
  const Vector a = vec(normal);
  return AffineSubspace<double>::from_equations(Matrix(a.transpose()), vec({offset}));
}

}  // namespace

TEST_SUITE("sets") {

TEST_CASE("ball and halfspace closed forms") {
  const Ball<double> b(Vector::Zero(3), 2.0);
  CHECK((project<double>(b, vec({3, 0, 0})) - vec({2, 0, 0})).norm() <= 1e-15);
  const Halfspace<double> h(vec({0, 1}), 0.0);
  CHECK((project<double>(h, vec({1, -5})) - vec({1, -5})).norm() == 0);
  CHECK((reflect<double>(h, vec({0, 3})) - vec({0, -3})).norm() <= 1e-15);
  CHECK((reflect<double>(b, vec({4, 0, 0})) - vec({0, 0, 0})).norm() <= 1e-15);
  CHECK((reflect<double>(b, vec({1, 0, 0})) - vec({1, 0, 0})).norm() == 0);
}

TEST_CASE("projections reject wrong dimensions and non-finite input") {
  const Ball<double> b(Vector::Zero(3), 1.0);
  CHECK_THROWS_AS(project<double>(b, vec({1, 2})), InputError);
  CHECK_THROWS_AS(project<double>(b, vec({1, NAN, 0})), InputError);
  CHECK_THROWS_AS(Ball<double>(Vector::Zero(2), -1.0), InputError);
}

TEST_CASE("affine subspace projection") {
  const AffineSubspace<double> L = plane({1, 1}, 1);
  CHECK((L.project(vec({0, 0})) - vec({0.5, 0.5})).norm() <= 1e-15);
  CHECK((L.project(vec({0.2, 0.8})) - vec({0.2, 0.8})).norm() <= 1e-15);

  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    Matrix A(2, 5);
    for (Index i = 0; i < 2; ++i) A.row(i) = oracle::gaussian(rng, 5).transpose();
    const Vector b = oracle::gaussian(rng, 2);
    const AffineSubspace<double> M = AffineSubspace<double>::from_equations(A, b);
    const Vector z = oracle::gaussian(rng, 5, 3.0);
    const Vector p = M.project(z);
    CHECK((A * p - b).norm() <= 1e-12);
    CHECK((M.basis().transpose() * (z - p)).norm() <= 1e-12);
    CHECK((p - oracle::flat(z, A, b)).norm() <= 1e-12);
    CHECK((M.from_coords(M.to_coords(p)) - p).norm() <= 1e-12);
  }
  Matrix bad(2, 2);
  bad << 1, 1, 2, 2;
  CHECK_THROWS_AS(AffineSubspace<double>::from_equations(bad, vec({1, 2})), InputError);
}

TEST_CASE("ellipsoid projection") {
  const Matrix Q = Eigen::Vector2d(0.25, 1.0).asDiagonal();
  const Ellipsoid<double> e(Q, Vector::Zero(2));
  CHECK((project<double>(e, vec({4, 0})) - vec({2, 0})).norm() <= 1e-12);
  CHECK((project<double>(e, vec({0.5, 0.5})) - vec({0.5, 0.5})).norm() == 0);
  CHECK((project<double>(e, vec({3, 2})) - oracle::ellipse(vec({3, 2}), 2, 1)).norm() <= 1e-6);

  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    const Vector z = oracle::gaussian(rng, 2, 3.0);
    CHECK((project<double>(e, z) - oracle::ellipse(z, 2, 1)).norm() <= 1e-6);
  }
}

TEST_CASE("sliced ellipsoid agrees with the ellipse in plane coordinates") {
  // Ellipse x^2/4 + y^2 <= 1 living in {z3 = 0} of R^3.
  Matrix Q = Matrix::Identity(3, 3);
  Q(0, 0) = 0.25;
  const Ellipsoid<double> e(Q, Vector::Zero(3), plane({0, 0, 1}, 0));
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 100; ++rep) {
    const Vector z = oracle::gaussian(rng, 3, 3.0);
    const Vector p = project<double>(e, z);
    const Vector ref = oracle::ellipse(z.head(2), 2, 1);
    CHECK(std::abs(p[2]) <= 1e-14);
    CHECK((p.head(2) - ref).norm() <= 1e-6);
  }
}

TEST_CASE("second-order cone") {
  const SecondOrderCone<double> K(2);
  CHECK((project<double>(K, vec({1, 0.5})) - vec({1, 0.5})).norm() == 0);
  CHECK((project<double>(K, vec({-2, 0})) - vec({0, 0})).norm() == 0);
  CHECK((project<double>(K, vec({0, 2})) - vec({1, 1})).norm() <= 1e-15);

  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 200; ++rep) {
    const Vector z = oracle::gaussian(rng, 4, 2.0);
    const SecondOrderCone<double> K4(4);
    CHECK((project<double>(K4, z) - oracle::soc(z)).norm() <= 1e-13);
  }
}

TEST_CASE("second-order cone preimage under an orthogonal map") {
  std::mt19937_64 rng(13);
  const Eigen::HouseholderQR<Matrix> qr(Matrix::NullaryExpr(3, 3, [&] { return oracle::uniform(rng, -1, 1); }));
  const Matrix C = qr.householderQ();
  const Vector d = oracle::gaussian(rng, 3, 0.3);
  const SecondOrderCone<double> K(C, d);
  for (int rep = 0; rep < 100; ++rep) {
    const Vector z = oracle::gaussian(rng, 3, 2.0);
    // z in preimage iff Cz + d in K; the map w = Cz + d is an isometry.
    const Vector ref = C.transpose() * (oracle::soc(C * z + d) - d);
    CHECK((project<double>(K, z) - ref).norm() <= 1e-12);
  }
}

TEST_CASE("power epigraph projection and its scalar root") {
  const PowerEpigraph<double> X(2.0, 0.0);
  const Vector p = project<double>(X, vec({1, 0}));
  // u (1 + 2u^2) = 1.
  CHECK(p[0] * (1 + 2 * p[0] * p[0]) == doctest::Approx(1).epsilon(1e-14));
  CHECK(p[0] == doctest::Approx(0.5897545123).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(p[0] * p[0]).epsilon(1e-14));

  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    const double alpha = oracle::uniform(rng, 1.2, 4.0), beta = oracle::uniform(rng, 0.0, 1.0);
    const PowerEpigraph<double> E(alpha, beta);
    const Vector z = oracle::gaussian(rng, 2, 1.5);
    const Vector ref = oracle::power_epigraph(z, alpha, beta);
    CHECK((project<double>(E, z) - ref).norm() <= 1e-7);
  }
  CHECK_THROWS_AS(PowerEpigraph<double>(1.0, 0.0), InputError);
}

TEST_CASE("psd cone clips eigenvalues") {
  const PsdCone<double> K(2);
  Matrix S = Eigen::Vector2d(1, -1).asDiagonal();
  const Matrix P = smat<double>(project<double>(K, svec<double>(S)));
  CHECK((P - Matrix(Eigen::Vector2d(1, 0).asDiagonal())).norm() <= 1e-14);

  std::mt19937_64 rng(31);
  const PsdCone<double> K4(4);
  for (int rep = 0; rep < 100; ++rep) {
    const Matrix T = oracle::random_symmetric(rng, 4);
    CHECK((smat<double>(project<double>(K4, svec<double>(T))) - oracle::psd(T)).norm() <= 1e-11);
  }
}

TEST_CASE("spectral box with unit trace") {
  const Matrix S = Eigen::Vector2d(2, 0).asDiagonal();
  CHECK((project_spectral_box_trace<double>(1.0, S) - Matrix(Eigen::Vector2d(1, 0).asDiagonal())).norm() <= 1e-14);
  const Matrix F = Eigen::Vector3d(0.3, 0.3, 0.4).asDiagonal();
  CHECK((project_spectral_box_trace<double>(0.5, F) - F).norm() <= 1e-14);
  CHECK_THROWS_AS(project_spectral_box_trace<double>(0.2, F), InputError);

  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 200; ++rep) {
    const Matrix T = oracle::random_symmetric(rng, 4);
    const Matrix P = project_spectral_box_trace<double>(0.5, T);
    CHECK((P - oracle::spectral_box_trace(T, 0.5)).norm() <= 1e-8);
    CHECK(P.trace() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("capped simplex against an exhaustive active-set oracle") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 200; ++rep) {
    const Vector w = oracle::gaussian(rng, 4);
    const double cap = 0.5;
    // Enumerate which coordinates sit at the cap; the rest share one shift.
    double best = INFINITY;
    Vector best_v;
    for (int mask = 0; mask < 16; ++mask) {
      int capped = 0;
      double free_sum = 0;
      for (int i = 0; i < 4; ++i) (mask >> i & 1) ? ++capped : (free_sum += w[i], 0);
      if (capped == 4) continue;
      const double mu = (free_sum - (1.0 - cap * capped)) / (4 - capped);
      Vector v(4);
      bool ok = true;
      for (int i = 0; i < 4; ++i) {
        v[i] = (mask >> i & 1) ? cap : w[i] - mu;
        if (v[i] > cap + 1e-12) ok = false;
        if ((mask >> i & 1) && w[i] - mu < cap - 1e-12) ok = false;
      }
      if (ok && (v - w).norm() < best) best = (v - w).norm(), best_v = v;
    }
    CHECK((project_capped_simplex<double>(cap, w) - best_v).norm() <= 1e-8);
  }
}

TEST_CASE("dykstra intersection") {
  const std::vector<SetPtr<double>> quadrant{std::make_shared<Halfspace<double>>(vec({1, 0}), 0.0),
                                             std::make_shared<Halfspace<double>>(vec({0, 1}), 0.0)};
  CHECK((dykstra_project<double>(quadrant, vec({1, 1}), 1e-14, 1000) - vec({0, 0})).norm() <= 1e-12);
  const std::vector<SetPtr<double>> one{std::make_shared<Ball<double>>(Vector::Zero(2), 1.0)};
  CHECK((dykstra_project<double>(one, vec({3, 4}), 1e-14, 10) - vec({0.6, 0.8})).norm() <= 1e-15);

  // Ball cap {||z|| <= 1, x >= 0.5}: either the radial point is in the cap,
  // or the answer lies on the chord circle, or on the arc edge.
  const std::vector<SetPtr<double>> cap{std::make_shared<Ball<double>>(Vector::Zero(2), 1.0),
                                        std::make_shared<Halfspace<double>>(vec({-1, 0}), -0.5)};
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 100; ++rep) {
    const Vector z = oracle::gaussian(rng, 2, 2.0);
    Vector ref;
    const Vector radial = oracle::ball(z, Vector::Zero(2), 1.0);
    const Vector chord = oracle::halfspace(z, vec({-1, 0}), -0.5);
    const double edge_y = std::sqrt(0.75);
    if (radial[0] >= 0.5) {
      ref = radial;
    } else if (chord.norm() <= 1.0) {
      ref = chord;
    } else {
      ref = vec({0.5, z[1] > 0 ? edge_y : -edge_y});
    }
    CHECK((dykstra_project<double>(cap, z, 1e-15, 100000) - ref).norm() <= 1e-9);
  }
}

TEST_CASE("dykstra reports non-convergence") {
  const std::vector<SetPtr<double>> tangent{std::make_shared<Ball<double>>(vec({-1, 0}), 1.0),
                                            std::make_shared<Ball<double>>(vec({1, 0}), 1.0)};
  CHECK_THROWS_AS(dykstra_project<double>(tangent, vec({0, 1}), 1e-15, 20), ConvergenceError);
}

TEST_CASE("boundary jets and regularity errors") {
  const Ball<double> b(vec({1, 0}), 2.0);
  const BoundaryJet<double> j = boundary_eval<double>(b, vec({3, 0}));
  CHECK(std::abs(j.g) <= 1e-15);
  CHECK(j.grad.norm() > 0);

  const SecondOrderCone<double> K(3);
  CHECK_THROWS_AS(boundary_eval<double>(K, Vector::Zero(3)), RegularityError);
  const PowerEpigraph<double> E(1.5, 0.0);
  CHECK_THROWS_AS(boundary_eval<double>(E, Vector::Zero(2)), RegularityError);
  const Halfspace<double> h(vec({0, 1}), 0.0);
  CHECK(boundary_eval<double>(h, vec({2, 0})).hess.norm() == 0);
}

TEST_CASE("kind names round-trip") {
  for (SetKind k : {SetKind::halfspace, SetKind::hyperplane, SetKind::affine_subspace, SetKind::ball,
                    SetKind::ellipsoid, SetKind::second_order_cone, SetKind::power_epigraph, SetKind::psd_cone,
                    SetKind::spectral_box_trace, SetKind::ball_in_affine, SetKind::dykstra_intersection})
    CHECK(kind_from_name(kind_name(k)) == k);
  CHECK_THROWS_AS(kind_from_name("torus"), InputError);
}

}  // TEST_SUITE
