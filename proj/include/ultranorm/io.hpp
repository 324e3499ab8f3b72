#pragma once

#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ultranorm/diagonal_norm.hpp"
#include "ultranorm/error.hpp"
#include "ultranorm/graded/analysis.hpp"
#include "ultranorm/graded/expr.hpp"
#include "ultranorm/graded/profile.hpp"
#include "ultranorm/graded/ring.hpp"
#include "ultranorm/rational.hpp"
#include "ultranorm/spectral.hpp"

namespace ultranorm::io {

using json = nlohmann::json;
using ultranorm::to_string;

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw Error(ErrorCode::parse, what); }

inline const json& field(const json& j, const char* key) {
  if (!j.is_object()) fail("expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key '") + key + "'");
  return *it;
}

inline Rat rat(const json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(Int(j.dump()));
  fail("expected a rational string, got " + j.dump());
}

inline std::vector<Rat> rats(const json& j) {
  if (!j.is_array()) fail("expected an array of rationals");
  std::vector<Rat> out;
  for (const auto& x : j) out.push_back(rat(x));
  return out;
}

inline json rats_json(const std::vector<Rat>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

inline std::vector<std::pair<Rat, Rat>> pairs(const json& j) {
  if (!j.is_array()) fail("expected an array of [x, y] pairs");
  std::vector<std::pair<Rat, Rat>> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) fail("expected an [x, y] pair");
    out.emplace_back(rat(p[0]), rat(p[1]));
  }
  return out;
}

inline json pairs_json(const std::vector<std::pair<Rat, Rat>>& v) {
  json out = json::array();
  for (const auto& [x, y] : v) out.push_back(json::array({to_string(x), to_string(y)}));
  return out;
}

}  // namespace detail

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, path + ": " + e.what());
  }
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Fields and norms

inline json to_json(const FieldSpec& f) {
  if (f.is_trivial()) return json{{"kind", "trivial-coefficients"}};
  return json{{"kind", "p-adic"}, {"p", f.prime()}};
}

inline FieldSpec field_from_json(const json& j) {
  const json& kind = detail::field(j, "kind");
  if (kind == "trivial-coefficients" || kind == "trivial") return FieldSpec::trivial();
  if (kind == "p-adic") {
    const json& p = detail::field(j, "p");
    if (!p.is_number_integer()) detail::fail("field.p must be an integer");
    try {
      return FieldSpec::padic(p.get<long>());
    } catch (const Error& e) {
      detail::fail(e.what());
    }
  }
  detail::fail("unknown field kind " + kind.dump());
}

inline std::string to_string(Mode m) { return m == Mode::norm ? "norm" : "filtration"; }

inline Mode mode_from_json(const json& j) {
  if (j == "norm") return Mode::norm;
  if (j == "filtration") return Mode::filtration;
  detail::fail("mode must be \"norm\" or \"filtration\", got " + j.dump());
}

inline json to_json(const DiagonalNorm& n) {
  json basis = json::array();
  for (std::size_t j = 0; j < n.dim(); ++j) basis.push_back(detail::rats_json(n.basis_vector(j)));
  return json{{"field", to_json(n.field())},
              {"mode", to_string(n.mode())},
              {"dim", n.dim()},
              {"basis", std::move(basis)},
              {"weights", detail::rats_json(n.weights())}};
}

inline DiagonalNorm norm_from_json(const json& j) {
  const FieldSpec f = field_from_json(detail::field(j, "field"));
  const Mode mode = mode_from_json(detail::field(j, "mode"));
  const json& dim = detail::field(j, "dim");
  if (!dim.is_number_unsigned()) detail::fail("dim must be a positive integer");
  const std::size_t n = dim.get<std::size_t>();
  const json& basis = detail::field(j, "basis");
  if (!basis.is_array() || basis.size() != n) detail::fail("basis must list dim columns");
  std::vector<Vector> cols;
  for (const auto& c : basis) {
    cols.push_back(detail::rats(c));
    if (cols.back().size() != n) detail::fail("basis columns must have dim entries");
  }
  std::vector<Rat> weights = detail::rats(detail::field(j, "weights"));
  if (weights.size() != n) detail::fail("weights must have dim entries");
  try {
    return DiagonalNorm(f, mode, Matrix::from_columns(cols), std::move(weights));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::singular_matrix || e.code() == ErrorCode::invalid_argument) detail::fail(e.what());
    throw;
  }
}

inline DiagonalNorm read_norm(const std::string& path) {
  const json j = read_json_file(path);
  try {
    return norm_from_json(j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Rings and graded norms

inline json to_json(const SectionRing& r) {
  json vertices = json::array();
  for (const auto& v : r.vertices()) vertices.push_back(v);
  return json{{"polytope", {{"vertices", std::move(vertices)}}}};
}

inline std::shared_ptr<const SectionRing> ring_from_json(const json& j) {
  const json& vertices = detail::field(detail::field(j, "polytope"), "vertices");
  if (!vertices.is_array() || vertices.empty()) detail::fail("polytope.vertices must be a nonempty array");
  std::vector<LatticePoint> pts;
  for (const auto& v : vertices) {
    if (!v.is_array()) detail::fail("vertex must be an array of integers");
    LatticePoint p;
    for (const auto& x : v) {
      if (!x.is_number_integer()) detail::fail("vertex coordinates must be integers");
      p.push_back(x.get<long>());
    }
    pts.push_back(std::move(p));
  }
  try {
    return std::make_shared<const SectionRing>(std::move(pts));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_argument) detail::fail(e.what());
    throw;
  }
}

inline std::shared_ptr<const SectionRing> read_ring(const std::string& path) { return ring_from_json(read_json_file(path)); }

inline json to_json(const ConvexProfile& f) {
  return json{{"interval", json::array({to_string(f.lo()), to_string(f.hi())})},
              {"breakpoints", detail::pairs_json(f.points())}};
}

inline ConvexProfile convex_from_json(const json& j) {
  const json& interval = detail::field(j, "interval");
  if (!interval.is_array() || interval.size() != 2) detail::fail("interval must be [lo, hi]");
  try {
    return ConvexProfile(detail::rat(interval[0]), detail::rat(interval[1]),
                         detail::pairs(detail::field(j, "breakpoints")));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_argument || e.code() == ErrorCode::domain) detail::fail(e.what());
    throw;
  }
}

inline json to_json(const GradedNorm& e) {
  json out;
  out["node"] = ultranorm::to_string(e.kind());
  switch (e.kind()) {
    case NodeKind::monomial: {
      out["field"] = to_json(e.field());
      out["mode"] = to_string(e.mode());
      const MonomialProfile& p = e.profile();
      if (p.kind() == MonomialProfile::Kind::breakpoints) {
        out["profile"] = detail::pairs_json(p.points());
      } else {
        json pieces = json::array();
        for (const auto& piece : p.pieces()) pieces.push_back(detail::rats_json(piece));
        out[p.kind() == MonomialProfile::Kind::affine_min ? "affine_min" : "affine_max"] = std::move(pieces);
      }
      break;
    }
    case NodeKind::table: {
      json norms = json::array();
      for (const auto& n : e.table_norms()) norms.push_back(to_json(n));
      out["norms"] = std::move(norms);
      break;
    }
    case NodeKind::translate:
      out["expr"] = to_json(e.left());
      out["c"] = to_string(e.scalar());
      break;
    case NodeKind::scale0:
      out["expr"] = to_json(e.left());
      out["t"] = to_string(e.scalar());
      break;
    case NodeKind::max:
      out["left"] = to_json(e.left());
      out["right"] = to_json(e.right());
      break;
    case NodeKind::action:
      out["nu0"] = to_json(e.left());
      out["alpha"] = to_json(e.right());
      break;
    case NodeKind::geodesic:
      out["from"] = to_json(e.left());
      out["to"] = to_json(e.right());
      out["t"] = to_string(e.scalar());
      break;
    case NodeKind::ray:
      out["nu0"] = to_json(e.left());
      out["alpha"] = to_json(e.right());
      out["t"] = to_string(e.scalar());
      break;
    case NodeKind::iota:
      out["profile"] = to_json(e.convex());
      out["nu0"] = to_json(e.left());
      break;
  }
  return out;
}

inline GradedNorm graded_from_json(const json& j, const std::shared_ptr<const SectionRing>& ring) {
  const json& node = detail::field(j, "node");
  if (!node.is_string()) detail::fail("node must be a string");
  const std::string kind = node.get<std::string>();
  auto sub = [&](const char* key) { return graded_from_json(detail::field(j, key), ring); };
  auto scalar = [&](const char* key) { return detail::rat(detail::field(j, key)); };
  if (kind == "monomial") {
    const FieldSpec f = field_from_json(detail::field(j, "field"));
    const Mode mode = mode_from_json(detail::field(j, "mode"));
    auto build = [&](MonomialProfile p) { return GradedNorm::monomial(ring, f, mode, std::move(p)); };
    try {
      if (j.contains("profile")) return build(MonomialProfile::breakpoints(detail::pairs(j["profile"])));
      for (const char* key : {"affine_min", "affine_max"}) {
        if (!j.contains(key)) continue;
        std::vector<std::vector<Rat>> pieces;
        if (!j[key].is_array()) detail::fail(std::string(key) + " must be an array");
        for (const auto& piece : j[key]) pieces.push_back(detail::rats(piece));
        const auto k = std::string(key) == "affine_min" ? MonomialProfile::Kind::affine_min
                                                        : MonomialProfile::Kind::affine_max;
        return build(MonomialProfile::affine(k, std::move(pieces)));
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::invalid_argument) detail::fail(e.what());
      throw;
    }
    detail::fail("monomial node needs 'profile', 'affine_min' or 'affine_max'");
  }
  if (kind == "table") {
    const json& norms = detail::field(j, "norms");
    if (!norms.is_array()) detail::fail("norms must be an array");
    std::vector<DiagonalNorm> list;
    for (const auto& n : norms) list.push_back(norm_from_json(n));
    return GradedNorm::table(ring, std::move(list));
  }
  if (kind == "translate") return GradedNorm::translate(sub("expr"), scalar("c"));
  if (kind == "scale0") return GradedNorm::scale0(sub("expr"), scalar("t"));
  if (kind == "max") return GradedNorm::max(sub("left"), sub("right"));
  if (kind == "action") return GradedNorm::action(sub("nu0"), sub("alpha"));
  if (kind == "geodesic") return GradedNorm::geodesic(sub("from"), sub("to"), scalar("t"));
  if (kind == "ray") return GradedNorm::ray(sub("nu0"), sub("alpha"), scalar("t"));
  if (kind == "iota") return GradedNorm::iota(convex_from_json(detail::field(j, "profile")), sub("nu0"));
  detail::fail("unknown node kind '" + kind + "'");
}

inline GradedNorm read_graded(const std::string& path, const std::shared_ptr<const SectionRing>& ring) {
  return graded_from_json(read_json_file(path), ring);
}

// ---------------------------------------------------------------------------
// CSV

inline void write_measure_csv(std::ostream& out, const SpectralMeasure& m) {
  out << "lambda,mass,lambda_decimal\n";
  const std::string mass = to_string(m.mass());
  for (const auto& x : m.atoms()) out << to_string(x) << ',' << mass << ',' << to_decimal(x) << '\n';
}

inline void write_table_csv(std::ostream& out, const ConvergenceTable& t, const std::string& index_name = "m") {
  out << index_name << ",value,value_decimal,diagnostic,diagnostic_decimal\n";
  for (const auto& r : t.rows)
    out << to_string(r.index) << ',' << to_string(r.value) << ',' << to_decimal(r.value) << ','
        << to_string(r.diagnostic) << ',' << to_decimal(r.diagnostic) << '\n';
}

}  // namespace ultranorm::io
