#pragma once

#include <json.hpp>

#include <string>

#include "tkstab/extremal.hpp"
#include "tkstab/plfunc.hpp"
#include "tkstab/polytope.hpp"
#include "tkstab/stability.hpp"

namespace tkstab {

// ordered_json keeps insertion order, so serialized reports are byte-stable.
using Json = nlohmann::ordered_json;

// Rationals travel as strings ("p" or "p/q") so verdict-bearing values never
// pass through floating point. Integer JSON numbers are accepted on input;
// non-integer numbers are rejected (write "0.5" or "1/2" instead).
inline Rat rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_unsigned()) return Rat(j.get<unsigned long long>());
  throw std::invalid_argument(
      "rational values must be integers or strings like \"3/4\" or \"0.75\", got: " + j.dump());
}

inline Json rational_to_json(const Rat& q) { return format_rational(q); }

inline Json ratvec_to_json(const RatVec& v) {
  Json arr = Json::array();
  for (const auto& x : v) arr.push_back(rational_to_json(x));
  return arr;
}

inline RatVec ratvec_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array of rationals");
  RatVec v;
  for (const auto& e : j) v.push_back(rational_from_json(e));
  return v;
}

inline Json zint_to_json(const ZInt& z) {
  if (z >= std::numeric_limits<long long>::min() && z <= std::numeric_limits<long long>::max())
    return z.template convert_to<long long>();
  return z.str();
}

// ---------------------------------------------------------------------------
// Polytope {"dimension": n, "normals": [[int,...],...], "offsets": [...]}
// ---------------------------------------------------------------------------

inline Json polytope_to_json(const Polytope& p) {
  Json j;
  j["dimension"] = p.dim();
  Json normals = Json::array();
  Json offsets = Json::array();
  for (const auto& f : p.facets()) {
    Json row = Json::array();
    for (const auto& c : f.normal) row.push_back(zint_to_json(c));
    normals.push_back(row);
    offsets.push_back(rational_to_json(f.offset));
  }
  j["normals"] = normals;
  j["offsets"] = offsets;
  return j;
}

inline Polytope polytope_from_json(const Json& j) {
  if (!j.contains("dimension") || !j.contains("normals") || !j.contains("offsets"))
    throw std::invalid_argument("polytope JSON needs dimension, normals, offsets");
  int dim = j.at("dimension").get<int>();
  std::vector<ZVec> normals;
  for (const auto& row : j.at("normals")) {
    ZVec z;
    for (const auto& e : row) {
      if (e.is_number_integer()) {
        z.push_back(ZInt(e.get<long long>()));
      } else if (e.is_string()) {
        z.push_back(ZInt(e.get<std::string>()));
      } else {
        throw std::invalid_argument("normal components must be integers");
      }
    }
    normals.push_back(std::move(z));
  }
  RatVec offsets = ratvec_from_json(j.at("offsets"));
  return Polytope::build(dim, std::move(normals), std::move(offsets));
}

// ---------------------------------------------------------------------------
// PL functions {"pieces": [{"A": [...], "a": ...}, ...]} and the simple
// shorthand {"a": [...], "c": ...}
// ---------------------------------------------------------------------------

inline Json affine_to_json(const AffineFunc& f) {
  Json j;
  j["A"] = ratvec_to_json(f.grad);
  j["a"] = rational_to_json(f.cst);
  return j;
}

inline Json plfunc_to_json(const PLFunc& f) {
  Json j;
  Json arr = Json::array();
  for (const auto& piece : f.pieces) arr.push_back(affine_to_json(piece));
  j["pieces"] = arr;
  return j;
}

inline Json simplepl_to_json(const SimplePL& v) {
  Json j;
  j["a"] = ratvec_to_json(v.a);
  j["c"] = rational_to_json(v.c);
  return j;
}

inline PLFunc plfunc_from_json(const Json& j) {
  PLFunc f;
  if (j.contains("pieces")) {
    for (const auto& pj : j.at("pieces")) {
      AffineFunc piece;
      piece.grad = ratvec_from_json(pj.at("A"));
      piece.cst = pj.contains("a") ? rational_from_json(pj.at("a")) : Rat(0);
      f.pieces.push_back(std::move(piece));
    }
    if (f.pieces.empty()) throw std::invalid_argument("PL function needs at least one piece");
    return f;
  }
  if (j.contains("a") && j.contains("c")) {
    SimplePL v{ratvec_from_json(j.at("a")), rational_from_json(j.at("c"))};
    if (is_zero_vec(v.a)) throw std::invalid_argument("simple PL direction must be nonzero");
    return v.to_pl();
  }
  throw std::invalid_argument("PL JSON needs either \"pieces\" or simple {\"a\", \"c\"}");
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json extremal_to_json(const ExtremalData& ext, bool positive) {
  Json j;
  j["rbar"] = rational_to_json(ext.rbar);
  Json theta;
  theta["A"] = ratvec_to_json(ext.theta.grad);
  theta["a"] = rational_to_json(ext.theta.cst);
  j["theta"] = theta;
  j["positive_on_P"] = positive;
  j["s"] = affine_to_json(ext.s);
  j["vol"] = rational_to_json(ext.vol);
  j["boundary_mass"] = rational_to_json(ext.boundary_mass);
  return j;
}

inline Json candidate_to_json(const Candidate& c) {
  Json j;
  j["pl"] = simplepl_to_json(c.v);
  j["L"] = rational_to_json(c.l);
  j["boundary_integral"] = rational_to_json(c.boundary);
  j["ratio"] = rational_to_json(c.ratio);
  return j;
}

inline Json stability_to_json(const StabilityReport& rep, const Polytope& p,
                              const ExtremalData& ext) {
  Json j;
  j["verdict"] = verdict_name(rep.verdict);
  if (rep.witness) {
    j["witness"] = candidate_to_json(*rep.witness);
    j["futaki_of_witness"] =
        rational_to_json(relative_futaki(p, ext, rep.witness->v.to_pl()));
  } else {
    j["witness"] = nullptr;
    j["futaki_of_witness"] = nullptr;
  }
  j["lambda_hat"] = rep.lambda_hat ? rational_to_json(*rep.lambda_hat) : Json(nullptr);
  j["height"] = rep.height;
  j["directions"] = rep.per_direction.size();
  j["candidates_evaluated"] = rep.candidates_evaluated;
  j["segments_skipped"] = rep.segments_skipped;
  return j;
}

}  // namespace tkstab
