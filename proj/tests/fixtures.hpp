#pragma once

#include <random>
#include <vector>

#include "gforge/catalog.hpp"
#include "gforge/galgebra.hpp"
#include "gforge/polynomial.hpp"
#include "gforge/presentation.hpp"

namespace fx {

using namespace gforge;

/// Klein four-group with the sign cocycle x2*y1 mod 2: u_a u_b = -u_b u_a.
inline Presentation pauli() {
  auto G = catalog::square(2);
  SubgroupData H(G, {0, 1, 2, 3});
  std::vector<int> e(16, 0);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) e[x * 4 + y] = ((x / 2) * (y % 2)) % 2;
  return Presentation(H, Cocycle(H, 2, e), {0});
}

/// (Z/3)^2 with alpha = x2*y1 mod 3; the tuple is (e) or (e, t) in the swap product.
inline Cocycle heisenbergCocycle(const SubgroupData& H) {
  std::vector<int> e(81, 0);
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) {
      const Elem x = H.elements()[a], y = H.elements()[b];
      e[a * 9 + b] = ((x / 3) % 3) * (y % 3) % 3;
    }
  return Cocycle(H, 3, e);
}

inline Presentation swapCase() {
  auto G = catalog::swapProduct(3);
  SubgroupData H(G, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  return Presentation(H, heisenbergCocycle(H), {0, 9});
}

inline Presentation heisenberg() {
  auto G = catalog::square(3);
  SubgroupData H(G, {0, 1, 2, 3, 4, 5, 6, 7, 8});
  return Presentation(H, heisenbergCocycle(H), {0});
}

/// Z2 grading on M_3 by (e, e, g).
inline Presentation eeg() {
  auto G = catalog::cyclic(2);
  SubgroupData H(G, {0});
  return Presentation(H, Cocycle::trivial(H), {0, 0, 1});
}

/// D6 = <s, t>, H = {e}, tuple (e,e,t,t,s,s,s^2t,s^2t).
inline Presentation d6() {
  auto G = catalog::dihedral(3);
  SubgroupData H(G, {0});
  const Elem s = 1, t = 3, s2t = 5;
  return Presentation(H, Cocycle::trivial(H), {0, 0, t, t, s, s, s2t, s2t});
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 r(20261016);
  return r;
}

inline int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

/// Small groups used by randomized suites.
inline std::vector<GroupPtr> smallGroups() {
  return {catalog::cyclic(4), catalog::cyclic(6), catalog::square(2), catalog::dihedral(3), catalog::dihedral(4),
          catalog::quaternion(), catalog::product(*catalog::cyclic(2), *catalog::dihedral(4)), catalog::cyclic(8),
          catalog::dihedral(6), catalog::product(*catalog::square(2), *catalog::cyclic(2))};
}

/// All subgroups of G (closure search from single generators).
inline std::vector<std::vector<Elem>> subgroups(const Group& G) {
  std::vector<Elem> all;
  for (Elem g = 0; g < G.order(); ++g) all.push_back(g);
  return intermediateSubgroups(G, {0}, all);
}

/// Random presentation with trivial cocycle.
inline Presentation randomPresentation(const GroupPtr& G, int maxLen = 8) {
  auto subs = subgroups(*G);
  SubgroupData H(G, subs[uniform(0, static_cast<int>(subs.size()) - 1)]);
  const int len = uniform(1, maxLen);
  std::vector<Elem> tuple;
  for (int i = 0; i < len; ++i) tuple.push_back(uniform(0, G->order() - 1));
  return Presentation(H, Cocycle::trivial(H), tuple);
}

/// Z2 with H = {e}, tuple (e, g).
inline Presentation z2Pair() {
  auto G = catalog::cyclic(2);
  SubgroupData H(G, {0});
  return Presentation(H, Cocycle::trivial(H), {0, 1});
}

/// Z3 with H = {e}, tuple (e, g, g^2).
inline Presentation z3Triple() {
  auto G = catalog::cyclic(3);
  SubgroupData H(G, {0});
  return Presentation(H, Cocycle::trivial(H), {0, 1, 2});
}

/// Presentations with every coset once in the tuple and S = G.
inline std::vector<Presentation> multiplicityOne() { return {pauli(), heisenberg(), swapCase(), z2Pair(), z3Triple()}; }

/// Random element of k as a small integer combination of a Q-basis.
inline CycScalar randomInField(const SubfieldDescriptor& k) {
  CycScalar c = CycScalar::zero(k.n);
  for (const auto& b : k.qBasis()) c += CycScalar::integer(uniform(-2, 2)) * b;
  return c;
}

/// First path-1 assignment (firstVar in row 1) where m is nonzero, with the
/// basis index of its value.
inline std::optional<std::pair<Assignment, std::size_t>> firstPathOneSupport(const GradedPolynomial& m, const GradedAlgebra& A,
                                                                             int firstVar) {
  std::vector<int> ids;
  std::vector<std::vector<std::size_t>> dom;
  for (const auto& v : m.vars()) {
    ids.push_back(v.id);
    std::vector<std::size_t> d;
    for (auto idx : A.homogeneous(v.degree))
      if (v.id != firstVar || A.basis(idx).i == 0) d.push_back(idx);
    if (d.empty()) return std::nullopt;
    dom.push_back(std::move(d));
  }
  std::vector<std::size_t> c(ids.size(), 0);
  while (true) {
    Assignment a;
    for (std::size_t s = 0; s < ids.size(); ++s) a[ids[s]] = dom[s][c[s]];
    auto v = evaluate(m, A, a);
    if (!v.isZero()) return std::make_pair(a, v.terms().begin()->first);
    std::size_t pos = ids.size();
    while (pos > 0 && ++c[pos - 1] == dom[pos - 1].size()) c[--pos] = 0;
    if (pos == 0) return std::nullopt;
  }
}

/// Random pure polynomial with coefficients in k. With tune set, the last
/// coefficient is chosen to cancel the path-1 value when that stays in k.
inline GradedPolynomial randomPurePolynomial(const GradedAlgebra& A, const SubfieldDescriptor& k, bool tune) {
  std::vector<Elem> degrees;
  for (auto [g, d] : A.dims()) degrees.push_back(g);
  const int r = uniform(2, 4);
  GradedPolynomial base;
  std::vector<int> Z;
  for (int v = 0; v < r; ++v) {
    base.addVar(v, degrees[uniform(0, static_cast<int>(degrees.size()) - 1)]);
    Z.push_back(v);
  }
  std::vector<std::vector<int>> good;
  std::vector<int> perm = Z;
  do {
    if (isGoodPermutation(base, A.presentation().H, Z, perm)) good.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::shuffle(good.begin() + 1, good.end(), rng());
  const int terms = std::min<int>(static_cast<int>(good.size()), uniform(1, 3));
  GradedPolynomial p = base;
  for (int t = 0; t + 1 < terms; ++t) p.addMonomial(t == 0 ? CycScalar::integer(uniform(1, 3)) : randomInField(k), good[t]);
  CycScalar last = randomInField(k);
  if (tune && terms > 1) {
    GradedPolynomial single = base;
    single.addMonomial(CycScalar::one(), good[terms - 1]);
    if (auto sup = firstPathOneSupport(single, A, 0)) {
      const auto rest = evaluate(p, A, sup->first).terms();
      const auto mine = evaluate(single, A, sup->first).terms().at(sup->second);
      auto it = rest.find(sup->second);
      const CycScalar c = it == rest.end() ? CycScalar::zero() : -(it->second / mine);
      if (k.contains(c)) last = c;
    }
  }
  p.addMonomial(last, good[terms - 1]);
  return p;
}

}  // namespace fx
