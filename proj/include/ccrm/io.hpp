#pragma once

#include "ccrm/diagnostics.hpp"
#include "ccrm/solvers.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace ccrm {

using Json = nlohmann::json;

// JSON set descriptors: {"kind": <name>, ...parameters}. Kinds and fields:
//   halfspace, hyperplane      normal: [..], offset: number
//   affine_subspace            A: [[..]], b: [..]
//   ball                       center: [..], radius: number
//   ball_in_affine             center, radius, hull: {A, b} (defaults to the problem hull)
//   ellipsoid                  shape: [[..]], center: [..], hull (optional)
//   second_order_cone          dim: n  or  C: [[..]], d: [..]
//   power_epigraph             alpha, beta
//   psd_cone                   n
//   spectral_box_trace         n, bound
//   dykstra_intersection       sets: [..], tol, max_iter, hull (optional), boundary_from (optional)
template <class R>
SetPtr<R> set_from_json(const Json& j, const std::optional<AffineSubspace<R>>& problem_hull = std::nullopt);
Json set_to_json(const ConvexSet<double>& set);

struct ProblemFile {
  FeasibilityProblem<double> problem;
  std::optional<Vector> z0;
};

/// ProblemFileV1: {"version": "1", "X": set, "Y": set, "hull": {A, b}?,
/// "reference": [..]?, "z0": [..]?, "constants": {kappa_x, kappa_y, omega}?}.
/// Throws InputError on schema violations or inconsistent dimensions.
template <class R> FeasibilityProblem<R> problem_from_json(const Json& j);
std::optional<Vector> start_from_json(const Json& j);
Json problem_to_json(const FeasibilityProblem<double>& problem, const std::optional<Vector>& z0);
Json read_json_file(const std::filesystem::path& path);

/// CSV with header k, z_1..z_n, dist_X, dist_Y, dist_ref. Doubles use the
/// shortest round-trip representation; binary128 values print 36 digits.
template <class R> std::string trace_to_csv(const SolveTrace<R>& trace);
/// Parses the CSV written by trace_to_csv (double precision).
SolveTrace<double> trace_from_csv(const std::string& text);

template <class R> Json trace_to_json(const SolveTrace<R>& trace);
Json rate_to_json(const RateReport& report);

std::string format_double(double x);

/// Writes through a temporary file in the same directory and renames it, so
/// readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace ccrm
