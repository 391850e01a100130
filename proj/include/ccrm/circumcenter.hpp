#pragma once

#include "ccrm/types.hpp"

#include <vector>

namespace ccrm {

enum class CircumStatus { nondegenerate, reduced_rank, coincident_all };

const char* status_name(CircumStatus status);

template <class R> struct CircumResult {
  Vec<R> center;
  CircumStatus status = CircumStatus::nondegenerate;
};

/// Point in the affine hull of `points` equidistant from all of them.
/// Points closer than 1e-12 * diameter (binary128: 1e-26) are merged first.
/// Throws GeometryError when no equidistant point exists in the hull
/// (distinct collinear points), InputError on empty or ragged input.
template <class R> CircumResult<R> circumcenter(const std::vector<Vec<R>>& points);

/// Same, for the points base, base + offsets[0], base + offsets[1], ...
/// Passing offsets directly avoids the cancellation of forming base + d and
/// subtracting base again.
template <class R> CircumResult<R> circumcenter_offsets(const Vec<R>& base, const std::vector<Vec<R>>& offsets);

extern template CircumResult<double> circumcenter<double>(const std::vector<Vector>&);
extern template CircumResult<Quad> circumcenter<Quad>(const std::vector<Vec<Quad>>&);
extern template CircumResult<double> circumcenter_offsets<double>(const Vector&, const std::vector<Vector>&);
extern template CircumResult<Quad> circumcenter_offsets<Quad>(const Vec<Quad>&, const std::vector<Vec<Quad>>&);

}  // namespace ccrm
