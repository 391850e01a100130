#include "ccrm/io.hpp"

#include "ccrm/linalg.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ccrm {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw InputError(std::string(what) + " must be a number");
  return j.get<double>();
}

template <class R> Vec<R> vector_from(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of numbers");
  Vec<R> v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = R(number(j[i], what));
  return v;
}

template <class R> Mat<R> matrix_from(const Json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? (j[0].is_array() ? j[0].size() : 0) : 0;
  Mat<R> m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError(std::string(what) + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = R(number(j[r][c], what));
  }
  return m;
}

template <class R> AffineSubspace<R> hull_from(const Json& j, Index n) {
  const Vec<R> b = vector_from<R>(field(j, "b"), "hull.b");
  Mat<R> A = matrix_from<R>(field(j, "A"), "hull.A");
  if (A.rows() == 0) A.resize(0, n);
  if (A.cols() != n) throw InputError("hull.A has the wrong number of columns");
  return AffineSubspace<R>::from_equations(A, b);
}

Index count(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1) throw InputError(std::string(what) + " must be a positive integer");
  return static_cast<Index>(j.get<long long>());
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (Index r = 0; r < m.rows(); ++r) a.push_back(to_json(Vector(m.row(r).transpose())));
  return a;
}

Json hull_to_json(const AffineSubspace<double>& L) { return {{"A", to_json(L.A())}, {"b", to_json(L.b())}}; }

template <class R> std::string format_scalar(const R& x) {
  if constexpr (std::is_same_v<R, double>) {
    return format_double(x);
  } else {
    return x.str(std::numeric_limits<R>::max_digits10, std::ios_base::scientific);
  }
}

}  // namespace

template <class R> SetPtr<R> set_from_json(const Json& j, const std::optional<AffineSubspace<R>>& problem_hull) {
  if (!j.is_object()) throw InputError("set descriptor must be an object");
  const Json& kind_field = field(j, "kind");
  if (!kind_field.is_string()) throw InputError("set kind must be a string");
  const SetKind kind = kind_from_name(kind_field.get<std::string>());

  auto own_hull = [&](Index n) -> std::optional<AffineSubspace<R>> {
    if (j.contains("hull")) return hull_from<R>(j.at("hull"), n);
    return std::nullopt;
  };

  switch (kind) {
    case SetKind::halfspace:
      return std::make_shared<Halfspace<R>>(vector_from<R>(field(j, "normal"), "normal"), R(number(field(j, "offset"), "offset")));
    case SetKind::hyperplane:
      return std::make_shared<Hyperplane<R>>(vector_from<R>(field(j, "normal"), "normal"), R(number(field(j, "offset"), "offset")));
    case SetKind::affine_subspace: {
      const Mat<R> A = matrix_from<R>(field(j, "A"), "A");
      return std::make_shared<AffineSet<R>>(AffineSubspace<R>::from_equations(A, vector_from<R>(field(j, "b"), "b")));
    }
    case SetKind::ball:
      return std::make_shared<Ball<R>>(vector_from<R>(field(j, "center"), "center"), R(number(field(j, "radius"), "radius")));
    case SetKind::ball_in_affine: {
      Vec<R> c = vector_from<R>(field(j, "center"), "center");
      std::optional<AffineSubspace<R>> L = own_hull(c.size());
      if (!L) L = problem_hull;
      if (!L) throw InputError("ball_in_affine needs a hull (in the set or the problem)");
      return std::make_shared<BallInAffine<R>>(std::move(c), R(number(field(j, "radius"), "radius")), *L);
    }
    case SetKind::ellipsoid: {
      Vec<R> c = vector_from<R>(field(j, "center"), "center");
      const Index n = c.size();
      return std::make_shared<Ellipsoid<R>>(matrix_from<R>(field(j, "shape"), "shape"), std::move(c), own_hull(n));
    }
    case SetKind::second_order_cone:
      if (j.contains("C"))
        return std::make_shared<SecondOrderCone<R>>(matrix_from<R>(j.at("C"), "C"), vector_from<R>(field(j, "d"), "d"));
      return std::make_shared<SecondOrderCone<R>>(count(field(j, "dim"), "dim"));
    case SetKind::power_epigraph:
      return std::make_shared<PowerEpigraph<R>>(R(number(field(j, "alpha"), "alpha")),
                                                R(j.contains("beta") ? number(j.at("beta"), "beta") : 0.0));
    case SetKind::psd_cone:
      return std::make_shared<PsdCone<R>>(count(field(j, "n"), "n"));
    case SetKind::spectral_box_trace:
      return std::make_shared<SpectralBoxTrace<R>>(count(field(j, "n"), "n"), R(number(field(j, "bound"), "bound")));
    case SetKind::dykstra_intersection: {
      const Json& parts = field(j, "sets");
      if (!parts.is_array() || parts.empty()) throw InputError("dykstra_intersection.sets must be a non-empty array");
      std::vector<SetPtr<R>> sets;
      for (const Json& p : parts) sets.push_back(set_from_json<R>(p, problem_hull));
      const R tol = j.contains("tol") ? R(number(j.at("tol"), "tol")) : Precision<R>::dykstra_tol();
      const int max_iter = j.contains("max_iter") ? static_cast<int>(count(j.at("max_iter"), "max_iter")) : 100000;
      std::optional<std::size_t> from;
      if (j.contains("boundary_from")) {
        const Json& b = j.at("boundary_from");
        if (!b.is_number_integer() || b.get<long long>() < 0) throw InputError("boundary_from must be a set index");
        from = static_cast<std::size_t>(b.get<long long>());
      }
      auto hull = own_hull(sets.front()->dim());
      return std::make_shared<DykstraIntersection<R>>(std::move(sets), tol, max_iter, std::move(hull), from);
    }
    case SetKind::hull_coordinates:
      break;
  }
  throw InputError("set kind '" + std::string(kind_name(kind)) + "' cannot be read from JSON");
}

Json set_to_json(const ConvexSet<double>& set) {
  Json j;
  j["kind"] = std::string(kind_name(set.kind()));
  if (const auto* s = dynamic_cast<const Halfspace<double>*>(&set)) {
    j["normal"] = to_json(s->normal());
    j["offset"] = s->offset();
  } else if (const auto* s = dynamic_cast<const Hyperplane<double>*>(&set)) {
    j["normal"] = to_json(s->normal());
    j["offset"] = s->offset();
  } else if (const auto* s = dynamic_cast<const AffineSet<double>*>(&set)) {
    j["A"] = to_json(s->subspace().A());
    j["b"] = to_json(s->subspace().b());
  } else if (const auto* s = dynamic_cast<const Ball<double>*>(&set)) {
    j["center"] = to_json(s->center());
    j["radius"] = s->radius();
  } else if (const auto* s = dynamic_cast<const BallInAffine<double>*>(&set)) {
    j["center"] = to_json(s->center());
    j["radius"] = s->radius();
    j["hull"] = hull_to_json(*s->affine_hull());
  } else if (const auto* s = dynamic_cast<const Ellipsoid<double>*>(&set)) {
    j["shape"] = to_json(s->shape());
    j["center"] = to_json(s->center());
    if (s->affine_hull()) j["hull"] = hull_to_json(*s->affine_hull());
  } else if (const auto* s = dynamic_cast<const SecondOrderCone<double>*>(&set)) {
    j["C"] = to_json(s->C());
    j["d"] = to_json(s->d());
  } else if (const auto* s = dynamic_cast<const PowerEpigraph<double>*>(&set)) {
    j["alpha"] = s->alpha();
    j["beta"] = s->beta();
  } else if (const auto* s = dynamic_cast<const PsdCone<double>*>(&set)) {
    j["n"] = s->side();
  } else if (const auto* s = dynamic_cast<const SpectralBoxTrace<double>*>(&set)) {
    j["n"] = s->side();
    j["bound"] = s->bound();
  } else if (const auto* s = dynamic_cast<const DykstraIntersection<double>*>(&set)) {
    Json parts = Json::array();
    for (const auto& p : s->sets()) parts.push_back(set_to_json(*p));
    j["sets"] = parts;
    j["tol"] = s->tol();
    j["max_iter"] = s->max_iter();
    if (s->affine_hull()) j["hull"] = hull_to_json(*s->affine_hull());
    if (s->boundary_from()) j["boundary_from"] = *s->boundary_from();
  } else {
    throw UnsupportedError("set kind '" + std::string(kind_name(set.kind())) + "' has no JSON form");
  }
  return j;
}

template <class R> FeasibilityProblem<R> problem_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("problem file must be a JSON object");
  const Json& version = field(j, "version");
  if (!(version == "1" || version == 1)) throw InputError("unsupported problem file version");

  FeasibilityProblem<R> p;
  if (j.contains("hull")) {
    // Dimension comes from the hull matrix itself.
    const Json& h = j.at("hull");
    const Mat<R> A = matrix_from<R>(field(h, "A"), "hull.A");
    if (A.rows() == 0) throw InputError("hull.A has no rows; omit the hull instead");
    p.common_hull = AffineSubspace<R>::from_equations(A, vector_from<R>(field(h, "b"), "hull.b"));
  }
  p.X = set_from_json<R>(field(j, "X"), p.common_hull);
  p.Y = set_from_json<R>(field(j, "Y"), p.common_hull);
  if (j.contains("reference")) p.reference = vector_from<R>(j.at("reference"), "reference");
  if (j.contains("constants")) {
    const Json& c = j.at("constants");
    p.constants = KnownConstants{number(field(c, "kappa_x"), "kappa_x"), number(field(c, "kappa_y"), "kappa_y"),
                                 number(field(c, "omega"), "omega")};
  }
  p.validate();
  if (j.contains("z0") && static_cast<Index>(j.at("z0").size()) != p.dim()) throw InputError("z0 has the wrong dimension");
  return p;
}

std::optional<Vector> start_from_json(const Json& j) {
  if (!j.contains("z0")) return std::nullopt;
  return vector_from<double>(j.at("z0"), "z0");
}

Json problem_to_json(const FeasibilityProblem<double>& problem, const std::optional<Vector>& z0) {
  Json j;
  j["version"] = "1";
  j["X"] = set_to_json(*problem.X);
  j["Y"] = set_to_json(*problem.Y);
  if (problem.common_hull) j["hull"] = hull_to_json(*problem.common_hull);
  if (problem.reference) j["reference"] = to_json(*problem.reference);
  if (problem.constants)
    j["constants"] = {{"kappa_x", problem.constants->kappa_x},
                      {"kappa_y", problem.constants->kappa_y},
                      {"omega", problem.constants->omega}};
  if (z0) j["z0"] = to_json(*z0);
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

template <class R> std::string trace_to_csv(const SolveTrace<R>& trace) {
  std::ostringstream out;
  const Index n = trace.iterates.empty() ? 0 : trace.iterates.front().size();
  out << "k";
  for (Index i = 0; i < n; ++i) out << ",z" << i + 1;
  out << ",dist_X,dist_Y,dist_ref\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << k;
    for (Index i = 0; i < n; ++i) out << ',' << format_scalar(trace.iterates[k][i]);
    out << ',' << format_scalar(trace.dist_x[k]) << ',' << format_scalar(trace.dist_y[k]) << ',';
    if (k < trace.dist_ref.size()) out << format_scalar(trace.dist_ref[k]);
    out << '\n';
  }
  return out.str();
}

SolveTrace<double> trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("trace CSV: empty input");
  const auto columns = static_cast<Index>(std::count(line.begin(), line.end(), ',') + 1);
  const Index n = columns - 4;
  if (n < 1 || line.rfind("k,", 0) != 0) throw InputError("trace CSV: unexpected header");

  auto parse = [](const std::string& cell) {
    double v = 0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) throw InputError("trace CSV: bad number '" + cell + "'");
    return v;
  };

  SolveTrace<double> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (static_cast<Index>(cells.size()) != columns) throw InputError("trace CSV: wrong number of cells");
    Vector z(n);
    for (Index i = 0; i < n; ++i) z[i] = parse(cells[static_cast<std::size_t>(i + 1)]);
    trace.iterates.push_back(z);
    trace.dist_x.push_back(parse(cells[static_cast<std::size_t>(n + 1)]));
    trace.dist_y.push_back(parse(cells[static_cast<std::size_t>(n + 2)]));
    if (!cells.back().empty()) trace.dist_ref.push_back(parse(cells.back()));
  }
  return trace;
}

template <class R> Json trace_to_json(const SolveTrace<R>& trace) {
  auto points = [](const std::vector<Vec<R>>& zs) {
    Json a = Json::array();
    for (const auto& z : zs) a.push_back(to_json(to_double(z)));
    return a;
  };
  auto values = [](const std::vector<R>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(to_double(x));
    return a;
  };
  Json statuses = Json::array();
  for (CircumStatus s : trace.statuses) statuses.push_back(status_name(s));
  return {{"method", std::string(method_name(trace.method))},
          {"termination", std::string(termination_name(trace.termination))},
          {"iterations", trace.size() - 1},
          {"iterates", points(trace.iterates)},
          {"centralized", points(trace.centralized)},
          {"circumcenter_status", statuses},
          {"dist_X", values(trace.dist_x)},
          {"dist_Y", values(trace.dist_y)},
          {"dist_ref", values(trace.dist_ref)}};
}

Json rate_to_json(const RateReport& report) {
  Json j{{"classification", std::string(rate_name(report.classification))},
         {"usable_entries", report.usable},
         {"linear_ratios", report.linear_ratios},
         {"quad_ratios", report.quad_ratios}};
  j["constant"] = std::isfinite(report.constant) ? Json(report.constant) : Json(nullptr);
  return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) throw InputError("write failed for " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InputError("cannot move output into place: " + path.string());
  }
}

template SetPtr<double> set_from_json<double>(const Json&, const std::optional<AffineSubspace<double>>&);
template SetPtr<Quad> set_from_json<Quad>(const Json&, const std::optional<AffineSubspace<Quad>>&);
template FeasibilityProblem<double> problem_from_json<double>(const Json&);
template FeasibilityProblem<Quad> problem_from_json<Quad>(const Json&);
template std::string trace_to_csv<double>(const SolveTrace<double>&);
template std::string trace_to_csv<Quad>(const SolveTrace<Quad>&);
template Json trace_to_json<double>(const SolveTrace<double>&);
template Json trace_to_json<Quad>(const SolveTrace<Quad>&);

}  // namespace ccrm
