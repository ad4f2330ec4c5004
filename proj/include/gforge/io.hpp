#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gforge/catalog.hpp"
#include "gforge/cyclo.hpp"
#include "gforge/error.hpp"
#include "gforge/galgebra.hpp"
#include "gforge/kform.hpp"
#include "gforge/polynomial.hpp"
#include "gforge/presentation.hpp"
#include "gforge/twisted.hpp"
#include "gforge/witness.hpp"

namespace gforge::io {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T as(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field '") + what + "' has the wrong type");
  }
}

inline mpz_class integer(const json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    try {
      return mpz_class(j.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw ParseError("expected an integer");
}

inline json integerJson(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

}  // namespace detail

inline json readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Indented dump that keeps arrays of scalars on one line.
inline std::string dump(const json& j, int indent = 0) {
  const std::string pad(indent, ' '), inner(indent + 2, ' ');
  auto flat = [](const json& a) {
    return std::all_of(a.begin(), a.end(), [](const json& x) { return x.is_primitive(); });
  };
  if (j.is_array()) {
    if (j.empty() || flat(j)) return j.dump();
    std::string s = "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) s += inner + dump(j[i], indent + 2) + (i + 1 < j.size() ? ",\n" : "\n");
    return s + pad + "]";
  }
  if (j.is_object()) {
    if (j.empty()) return "{}";
    std::string s = "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i)
      s += inner + json(it.key()).dump() + ": " + dump(it.value(), indent + 2) + (i + 1 < j.size() ? ",\n" : "\n");
    return s + pad + "}";
  }
  return j.dump();
}

// ---- groups ---------------------------------------------------------------

inline GroupPtr parseGroup(const json& j) {
  if (!j.is_object()) throw ParseError("group must be an object");
  std::vector<std::string> names;
  if (j.contains("names")) names = detail::as<std::vector<std::string>>(j.at("names"), "names");
  if (j.contains("table")) {
    auto table = detail::as<std::vector<std::vector<int>>>(j.at("table"), "table");
    if (j.contains("order") && detail::as<std::size_t>(j.at("order"), "order") != table.size())
      throw ParseError("group order does not match the table");
    return makeGroup(Group::fromTable(table, names));
  }
  if (j.contains("generators")) {
    auto gens = detail::as<std::vector<std::vector<int>>>(j.at("generators"), "generators");
    const int degree = detail::as<int>(detail::field(j, "degree"), "degree");
    Group G = Group::fromPermutations(gens, degree, names);
    if (j.contains("generator_names") && names.empty()) {
      auto letters = detail::as<std::vector<std::string>>(j.at("generator_names"), "generator_names");
      if (letters.size() != gens.size()) throw ParseError("generator_names must name every generator");
      // generators sit right after the identity in discovery order
      std::map<std::vector<int>, Elem> seen;
      std::vector<int> id(degree);
      for (int i = 0; i < degree; ++i) id[i] = i;
      seen[id] = 0;
      std::vector<Elem> elems;
      for (const auto& g : gens) {
        auto [it, fresh] = seen.emplace(g, static_cast<Elem>(seen.size()));
        elems.push_back(it->second);
      }
      G = Group::fromPermutations(gens, degree, catalog::wordNames(G, elems, letters));
    }
    return makeGroup(std::move(G));
  }
  throw ParseError("group needs either 'table' or 'generators'");
}

inline json toJson(const Group& G) {
  json j;
  j["order"] = G.order();
  json table = json::array();
  for (Elem a = 0; a < G.order(); ++a) {
    json row = json::array();
    for (Elem b = 0; b < G.order(); ++b) row.push_back(G.mul(a, b));
    table.push_back(row);
  }
  j["table"] = table;
  if (!G.names().empty()) j["names"] = G.names();
  return j;
}

/// Element reference: index or name.
inline Elem parseElem(const Group& G, const json& j) {
  if (j.is_number_integer()) {
    const long long v = j.get<long long>();
    if (v < 0 || v >= G.order()) throw ParseError("element " + std::to_string(v) + " is out of range");
    return static_cast<Elem>(v);
  }
  if (j.is_string()) {
    if (auto e = G.find(j.get<std::string>())) return *e;
    throw ParseError("unknown element '" + j.get<std::string>() + "'");
  }
  throw ParseError("element must be an index or a name");
}

inline std::vector<Elem> parseElems(const Group& G, const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of elements");
  std::vector<Elem> out;
  for (const auto& x : j) out.push_back(parseElem(G, x));
  return out;
}

// ---- scalars and fields ---------------------------------------------------

inline CycScalar parseScalar(const json& j) {
  if (j.is_number_integer() || j.is_string()) return CycScalar::rational(mpq_class(detail::integer(j)));
  const int m = detail::as<int>(detail::field(j, "modulus"), "modulus");
  if (m <= 0) throw ParseError("scalar modulus must be positive");
  const json& cs = detail::field(j, "coeffs");
  if (!cs.is_array()) throw ParseError("coeffs must be an array");
  std::vector<mpq_class> v;
  for (const auto& c : cs) {
    if (!c.is_array() || c.size() != 2) throw ParseError("each coefficient is [num, den]");
    const mpz_class den = detail::integer(c[1]);
    if (den == 0) throw ParseError("zero denominator");
    mpq_class q(detail::integer(c[0]), den);
    q.canonicalize();
    v.push_back(q);
  }
  return CycScalar::fromCoeffs(m, std::move(v));
}

inline json toJson(const CycScalar& x) {
  json cs = json::array();
  for (const auto& q : x.coeffs()) cs.push_back(json::array({detail::integerJson(q.get_num()), detail::integerJson(q.get_den())}));
  return {{"modulus", x.modulus()}, {"coeffs", cs}};
}

inline SubfieldDescriptor parseSubfield(const json& j) {
  return SubfieldDescriptor(detail::as<int>(detail::field(j, "n"), "n"),
                            detail::as<std::vector<int>>(detail::field(j, "unit_generators"), "unit_generators"));
}

inline json toJson(const SubfieldDescriptor& k) {
  return {{"n", k.n}, {"unit_generators", k.U}, {"degree", k.degree()}, {"name", k.str()}};
}

// ---- cocycles and presentations --------------------------------------------

inline Cocycle parseCocycle(const SubgroupData& H, const json& j) {
  const int m = detail::as<int>(detail::field(j, "modulus"), "modulus");
  auto rows = detail::as<std::vector<std::vector<int>>>(detail::field(j, "exps"), "exps");
  if (static_cast<int>(rows.size()) != H.order()) throw ParseError("cocycle table must have |H| rows");
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != H.order()) throw ParseError("cocycle table must have |H| columns");
  return Cocycle::fromRows(H, m, rows);
}

inline json toJson(const Cocycle& a) { return {{"modulus", a.modulus()}, {"exps", a.rows()}}; }

inline Presentation parsePresentation(const json& j) {
  GroupPtr G = parseGroup(detail::field(j, "group"));
  SubgroupData H(G, parseElems(*G, detail::field(j, "subgroup")));
  Cocycle alpha = j.contains("cocycle") ? parseCocycle(H, j.at("cocycle")) : Cocycle::trivial(H);
  return Presentation(H, alpha, parseElems(*G, detail::field(j, "tuple")));
}

inline json toJson(const Presentation& P) {
  return {{"group", toJson(P.group())}, {"subgroup", P.H.elements()}, {"cocycle", toJson(P.alpha)}, {"tuple", P.tuple}};
}

// ---- elements and polynomials ---------------------------------------------

inline AlgElement parseElement(const GradedAlgebra& A, const json& j) {
  AlgElement x(A);
  const json& terms = detail::field(j, "terms");
  if (!terms.is_array()) throw ParseError("terms must be an array");
  for (const auto& t : terms) {
    const int h = detail::as<int>(detail::field(t, "h"), "h");
    const int r = detail::as<int>(detail::field(t, "i"), "i");
    const int c = detail::as<int>(detail::field(t, "j"), "j");
    if (h < 0 || h >= A.hOrder() || r < 0 || r >= A.n() || c < 0 || c >= A.n()) throw ParseError("term index out of range");
    x.add(A.index(h, r, c), t.contains("coeff") ? parseScalar(t.at("coeff")) : CycScalar::one());
  }
  return x;
}

inline json toJson(const AlgElement& x) {
  json terms = json::array();
  for (const auto& [idx, c] : x.terms()) {
    const auto b = x.algebra().basis(idx);
    terms.push_back({{"h", b.h}, {"i", b.i}, {"j", b.j}, {"coeff", toJson(c)}});
  }
  return {{"terms", terms}};
}

inline GradedPolynomial parsePolynomial(const Group& G, const json& j) {
  GradedPolynomial p;
  for (const auto& v : detail::field(j, "vars")) p.addVar(detail::as<int>(detail::field(v, "id"), "id"), parseElem(G, detail::field(v, "degree")));
  for (const auto& m : detail::field(j, "monomials"))
    p.addMonomial(m.contains("coeff") ? parseScalar(m.at("coeff")) : CycScalar::one(),
                  detail::as<std::vector<int>>(detail::field(m, "seq"), "seq"));
  return p;
}

inline json toJson(const GradedPolynomial& p) {
  json vars = json::array(), monos = json::array();
  for (const auto& v : p.vars()) vars.push_back({{"id", v.id}, {"degree", v.degree}});
  for (const auto& m : p.monomials()) monos.push_back({{"coeff", toJson(m.coeff)}, {"seq", m.seq}});
  return {{"vars", vars}, {"monomials", monos}};
}

// ---- reports ---------------------------------------------------------------

inline json toJson(const InvariantChain& c) {
  json action = json::array();
  for (const auto& [s, jv] : c.action) action.push_back(json::array({s, jv}));
  return {{"K", c.K},
          {"N", c.N},
          {"S", c.S},
          {"normalizer", c.normalizer},
          {"n", c.n},
          {"cocycleModulus", c.cocycleModulus},
          {"sBarImage", c.sBarImage},
          {"action", action},
          {"k", toJson(c.k)},
          {"wordBound", c.wordBound},
          {"stable", c.stable}};
}

inline json toJson(const Classification& c) {
  return {{"divisionForm", c.divisionForm}, {"stronglyVP", c.stronglyVP}, {"essentiallyVP", c.essentiallyVP},
          {"hNormal", c.hNormal},           {"equalFrequency", c.equalFrequency}, {"alphaInvariant", c.alphaInvariant}};
}

inline json toJson(const CosetMultiset& m) {
  json j = json::array();
  for (const auto& [coset, k] : m.counts) j.push_back(json::array({coset, k}));
  return j;
}

inline json assignmentJson(const GradedAlgebra& A, const Assignment& a) {
  json j = json::array();
  for (const auto& [var, idx] : a) {
    const auto b = A.basis(idx);
    j.push_back({{"var", var}, {"h", b.h}, {"i", b.i}, {"j", b.j}, {"name", A.basisName(idx)}});
  }
  return j;
}

inline json toJson(const GradedAlgebra& A, const IdentityReport& r) {
  json j{{"isIdentity", r.isIdentity}, {"searchSize", r.searchSize}, {"linearized", r.linearized}};
  if (r.falsifying) j["falsifying"] = assignmentJson(A, *r.falsifying);
  return j;
}

inline json indexNames(const GradedAlgebra& A, const std::vector<std::size_t>& idx) {
  json j = json::array();
  for (auto i : idx) j.push_back(A.basisName(i));
  return j;
}

inline json toJson(const GradedAlgebra& A, const WitnessBundle& w, const E0Conditions& c) {
  return {{"E0", indexNames(A, w.E0)},
          {"E1", indexNames(A, w.E1)},
          {"designatedCount", w.de},
          {"designatedPositions", w.designated},
          {"framePositions", w.frames},
          {"bridgePositions", w.bridges},
          {"conditions",
           {{"separatedByE", c.separatedByE},
            {"blocksInOrder", c.blocksInOrder},
            {"nonDesignatedEnds", c.nonDesignatedEnds},
            {"bridgesCompliant", c.bridgesCompliant},
            {"nonzero", c.nonzero},
            {"coversDelta", c.coversDelta}}},
          {"Z1", toJson(w.Z1)},
          {"p1Monomials", w.p1.monomials().size()}};
}

inline json toJson(const KForm& f) {
  json gens = json::array();
  for (std::size_t i = 0; i < f.generators.size(); ++i) gens.push_back({{"label", f.labels[i]}, {"element", toJson(f.generators[i])}});
  const auto& r = f.report;
  return {{"construction", r.construction},
          {"generators", gens},
          {"qDim", r.qDim},
          {"kDegree", r.kDegree},
          {"kDim", r.kDim},
          {"expectedDim", r.expectedDim},
          {"fRank", r.fRank},
          {"closed", r.closed},
          {"ok", r.ok},
          {"notes", r.notes}};
}

}  // namespace gforge::io
