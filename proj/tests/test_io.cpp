#include "ccrm/io.hpp"
#include "ccrm/problems.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <charconv>
#include <fstream>

using namespace ccrm;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "ccrm_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

Json parse(const char* text) { return Json::parse(text); }

}  // namespace

TEST_SUITE("io") {

TEST_CASE("trace CSV round-trips bit-exactly") {
  for (const char* name : {"discs3d", "sdp", "epigraph:a=2,b=0"}) {
    CAPTURE(name);
    const CatalogEntry<double> e = resolve_problem<double>(name);
    SolverConfig<double> cfg;
    cfg.max_iter = 200;
    const SolveTrace<double> t = run(e.problem, cfg, e.z0);
    const SolveTrace<double> back = trace_from_csv(trace_to_csv(t));
    REQUIRE(back.size() == t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
      CHECK((back.iterates[k].array() == t.iterates[k].array()).all());
      CHECK(back.dist_x[k] == t.dist_x[k]);
      CHECK(back.dist_y[k] == t.dist_y[k]);
    }
    CHECK(back.dist_ref == t.dist_ref);
  }
}

TEST_CASE("shortest round-trip formatting of awkward doubles") {
  for (double x : {0.1, 1.0 / 3, 5e-324, 1.7976931348623157e308, -2.5e-17}) {
    const std::string text = format_double(x);
    double back = 0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == x);
  }
}

TEST_CASE("trace CSV header and binary128 precision") {
  const CatalogEntry<Quad> e = make_discs3d<Quad>();
  const SolveTrace<Quad> t = run(e.problem, SolverConfig<Quad>{}, e.z0);
  const std::string csv = trace_to_csv(t);
  CHECK(csv.rfind("k,z1,z2,z3,dist_X,dist_Y,dist_ref\n", 0) == 0);
  CHECK(csv.find("5.4529") != std::string::npos);
  CHECK_THROWS_AS(trace_from_csv("a,b\n1,2\n"), InputError);
  CHECK_THROWS_AS(trace_from_csv("k,z1,dist_X,dist_Y,dist_ref\n0,abc,1,1,\n"), InputError);
}

TEST_CASE("trace JSON fields") {
  const CatalogEntry<double> e = make_discs3d<double>();
  const Json j = trace_to_json(run(e.problem, SolverConfig<double>{}, e.z0));
  CHECK(j.at("method") == "ccrm");
  CHECK(j.at("termination") == "feasible");
  CHECK(j.at("iterates").size() == j.at("iterations").get<std::size_t>() + 1);
  CHECK(j.at("centralized").size() == j.at("iterations").get<std::size_t>());
  CHECK(j.at("circumcenter_status").at(0) == "nondegenerate");
}

TEST_CASE("every catalog entry survives the problem-file round trip") {
  std::mt19937_64 rng(101);
  for (const std::string& name : catalog_names()) {
    CAPTURE(name);
    const CatalogEntry<double> e = resolve_problem<double>(name);
    const Json j = problem_to_json(e.problem, e.z0);
    const Json reparsed = Json::parse(j.dump());
    const FeasibilityProblem<double> p = problem_from_json<double>(reparsed);
    CHECK(p.dim() == e.problem.dim());
    CHECK((*start_from_json(reparsed) - e.z0).norm() == 0);
    for (int rep = 0; rep < 20; ++rep) {
      const Vector z = e.z0 + oracle::gaussian(rng, e.z0.size());
      CHECK((project<double>(*p.X, z) - project<double>(*e.problem.X, z)).norm() <= 1e-12);
      CHECK((project<double>(*p.Y, z) - project<double>(*e.problem.Y, z)).norm() <= 1e-12);
    }
    const FeasibilityProblem<Quad> q = problem_from_json<Quad>(reparsed);
    CHECK(q.dim() == e.problem.dim());
  }
}

TEST_CASE("problem-file schema errors") {
  CHECK_THROWS_AS(problem_from_json<double>(parse(R"({"X": {"kind": "ball", "center": [0], "radius": 1}})")), InputError);
  CHECK_THROWS_AS(problem_from_json<double>(parse(R"({"version": "2"})")), InputError);
  CHECK_THROWS_AS(problem_from_json<double>(parse(
                      R"({"version": "1", "X": {"kind": "ball", "center": [0, 0], "radius": 1},
                          "Y": {"kind": "ball", "center": [0, 0, 0], "radius": 1}})")),
                  InputError);
  CHECK_THROWS_AS(problem_from_json<double>(parse(
                      R"({"version": "1", "X": {"kind": "cube"}, "Y": {"kind": "ball", "center": [0], "radius": 1}})")),
                  InputError);
  CHECK_THROWS_AS(problem_from_json<double>(parse(
                      R"({"version": "1", "X": {"kind": "ball", "center": [0, "a"], "radius": 1},
                          "Y": {"kind": "ball", "center": [0, 0], "radius": 1}})")),
                  InputError);
  CHECK_THROWS_AS(problem_from_json<double>(parse(
                      R"({"version": "1", "X": {"kind": "ball_in_affine", "center": [0, 0], "radius": 1},
                          "Y": {"kind": "ball", "center": [0, 0], "radius": 1}})")),
                  InputError);
  CHECK_THROWS_AS(problem_from_json<double>(parse(
                      R"({"version": "1", "X": {"kind": "ball", "center": [0, 0], "radius": 1},
                          "Y": {"kind": "ball", "center": [0, 0], "radius": 1}, "z0": [1, 2, 3]})")),
                  InputError);
}

TEST_CASE("minimal problem file with a hull") {
  const FeasibilityProblem<double> p = problem_from_json<double>(parse(R"({
    "version": "1",
    "hull": {"A": [[0, 0, 1]], "b": [0]},
    "X": {"kind": "ball_in_affine", "center": [0, 0, 0], "radius": 2},
    "Y": {"kind": "ball_in_affine", "center": [3.872983346207417, 0, 0], "radius": 2},
    "reference": [1.9364916731037085, 0.5, 0]
  })"));
  CHECK(p.common_hull);
  CHECK(distance<double>(*p.X, *p.reference) <= 1e-12);
}

TEST_CASE("atomic writes replace the whole file") {
  const auto path = scratch_dir() / "atomic.txt";
  write_file_atomic(path, "first\n");
  write_file_atomic(path, "second\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "second");
  auto tmp = path;
  tmp += ".tmp";
  CHECK_FALSE(std::filesystem::exists(tmp));
  CHECK_THROWS_AS(write_file_atomic(scratch_dir() / "missing" / "x.txt", "x"), InputError);
}

TEST_CASE("rate report JSON") {
  const RateReport r = rate_report({1.0, 0.5, 0.25, 0.125});
  const Json j = rate_to_json(r);
  CHECK(j.at("classification") == "linear");
  CHECK(j.at("linear_ratios").size() == 3);
}

}  // TEST_SUITE
