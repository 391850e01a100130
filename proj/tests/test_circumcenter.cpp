#include "ccrm/circumcenter.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace ccrm;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_SUITE("circumcenter") {

TEST_CASE("right triangle has its circumcenter at the hypotenuse midpoint") {
  const CircumResult<double> c = circumcenter<double>({v2(0, 0), v2(2, 0), v2(0, 2)});
  CHECK((c.center - v2(1, 1)).norm() <= 1e-14);
  CHECK(c.status == CircumStatus::nondegenerate);
}

TEST_CASE("equilateral triangle") {
  const CircumResult<double> c = circumcenter<double>({v2(0, 0), v2(1, 0), v2(0.5, std::sqrt(3.0) / 2)});
  CHECK((c.center - v2(0.5, std::sqrt(3.0) / 6)).norm() <= 1e-14);
}

TEST_CASE("coincident and duplicated points") {
  const Vector p = v2(1.5, -2);
  const CircumResult<double> all = circumcenter<double>({p, p, p});
  CHECK(all.status == CircumStatus::coincident_all);
  CHECK((all.center - p).norm() == 0);

  const CircumResult<double> two = circumcenter<double>({v2(0, 0), v2(2, 0), v2(2, 0)});
  CHECK(two.status == CircumStatus::reduced_rank);
  CHECK((two.center - v2(1, 0)).norm() <= 1e-14);
}

TEST_CASE("distinct collinear points have no circumcenter") {
  CHECK_THROWS_AS(circumcenter<double>({v2(0, 0), v2(1, 0), v2(3, 0)}), GeometryError);
}

TEST_CASE("random triples in R^5 are equidistant and match the normal-equation oracle") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    const std::vector<Vector> pts{oracle::gaussian(rng, 5), oracle::gaussian(rng, 5), oracle::gaussian(rng, 5)};
    const Vector c = circumcenter<double>(pts).center;
    const double r0 = (c - pts[0]).norm();
    CHECK(std::abs((c - pts[1]).norm() - r0) <= 1e-9 * (1 + r0));
    CHECK(std::abs((c - pts[2]).norm() - r0) <= 1e-9 * (1 + r0));
    CHECK((c - oracle::circumcenter(pts)).norm() <= 1e-9 * (1 + r0));
  }
}

TEST_CASE("four affinely independent points in R^4") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 50; ++rep) {
    const std::vector<Vector> pts{oracle::gaussian(rng, 4), oracle::gaussian(rng, 4), oracle::gaussian(rng, 4),
                                  oracle::gaussian(rng, 4)};
    const Vector c = circumcenter<double>(pts).center;
    CHECK((c - oracle::circumcenter(pts)).norm() <= 1e-8 * (1 + c.norm()));
  }
}

TEST_CASE("offset form agrees with the point form in binary128") {
  std::mt19937_64 rng(29);
  const Vec<Quad> base = from_double<Quad>(oracle::gaussian(rng, 3));
  const std::vector<Vec<Quad>> offs{from_double<Quad>(oracle::gaussian(rng, 3)), from_double<Quad>(oracle::gaussian(rng, 3))};
  const Vec<Quad> a = circumcenter_offsets<Quad>(base, offs).center;
  const Vec<Quad> b = circumcenter<Quad>({base, Vec<Quad>(base + offs[0]), Vec<Quad>(base + offs[1])}).center;
  CHECK(to_double(Quad((a - b).norm())) <= 1e-30);
}

}  // TEST_SUITE
