#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gforge/cyclo.hpp"
#include "gforge/error.hpp"
#include "gforge/group.hpp"
#include "gforge/parallel.hpp"
#include "gforge/twisted.hpp"

namespace gforge {

/// (G, H, alpha, tuple). The tuple lists right coset representatives g_i.
struct Presentation {
  SubgroupData H;
  Cocycle alpha;
  std::vector<Elem> tuple;

  Presentation() = default;
  Presentation(SubgroupData h, Cocycle a, std::vector<Elem> t) : H(std::move(h)), alpha(std::move(a)), tuple(std::move(t)) {
    if (alpha.subgroup().elements() != H.elements()) throw PreconditionError("cocycle does not live on H");
    for (Elem g : tuple)
      if (g < 0 || g >= H.group().order()) throw PreconditionError("tuple entry " + std::to_string(g) + " is not in G");
  }

  const Group& group() const { return H.group(); }
  const GroupPtr& groupPtr() const { return H.groupPtr(); }
  int size() const { return static_cast<int>(tuple.size()); }
  CosetMultiset lambda() const { return CosetMultiset::fromTuple(H, tuple); }

  bool operator==(const Presentation& o) const {
    return H.elements() == o.H.elements() && tuple == o.tuple && alpha == o.alpha;
  }
};

struct PresentationReport {
  bool wellformed = false;
  bool connected = false;
  std::vector<std::string> problems;
};

/// Subgroup generated by the degrees g_i^-1 h g_j that carry nonzero components.
inline std::vector<Elem> supportSubgroup(const Presentation& P) {
  const Group& G = P.group();
  std::set<Elem> gens;
  for (Elem gi : P.tuple)
    for (Elem gj : P.tuple)
      for (Elem h : P.H.elements()) gens.insert(G.mul(G.mul(G.inv(gi), h), gj));
  std::vector<Elem> v(gens.begin(), gens.end());
  return G.generated(v);
}

inline PresentationReport validatePresentation(const Presentation& P) {
  PresentationReport r;
  if (P.tuple.empty()) r.problems.push_back("tuple is empty");
  if (!P.group().isSubgroup(P.H.elements())) r.problems.push_back("H is not a subgroup");
  if (!validateCocycle(P.alpha)) r.problems.push_back("alpha fails the normalized 2-cocycle identity");
  r.wellformed = r.problems.empty();
  if (!P.tuple.empty()) r.connected = static_cast<int>(supportSubgroup(P).size()) == P.group().order();
  return r;
}

struct Move {
  enum class Kind { I, II, III } kind = Kind::II;
  int pos = 0;             // I
  Elem h = 0;              // I
  std::vector<int> perm;   // II: new[i] = old[perm[i]]
  Elem g = 0;              // III

  static Move left(int pos, Elem h) { return {Kind::I, pos, h, {}, 0}; }
  static Move permute(std::vector<int> p) { return {Kind::II, 0, 0, std::move(p), 0}; }
  static Move translate(Elem g) { return {Kind::III, 0, 0, {}, g}; }
};

inline Presentation applyMove(const Presentation& P, const Move& mv) {
  const Group& G = P.group();
  Presentation out = P;
  switch (mv.kind) {
    case Move::Kind::I:
      if (mv.pos < 0 || mv.pos >= P.size()) throw PreconditionError("move I position out of range");
      if (mv.h < 0 || mv.h >= G.order() || !P.H.contains(mv.h)) throw PreconditionError("move I element is not in H");
      out.tuple[mv.pos] = G.mul(mv.h, P.tuple[mv.pos]);
      return out;
    case Move::Kind::II: {
      if (static_cast<int>(mv.perm.size()) != P.size()) throw PreconditionError("move II permutation has wrong length");
      std::vector<char> seen(P.size(), 0);
      for (int i = 0; i < P.size(); ++i) {
        const int p = mv.perm[i];
        if (p < 0 || p >= P.size() || seen[p]) throw PreconditionError("move II needs a permutation");
        seen[p] = 1;
        out.tuple[i] = P.tuple[p];
      }
      return out;
    }
    case Move::Kind::III: {
      if (mv.g < 0 || mv.g >= G.order()) throw PreconditionError("move III element is not in G");
      Cocycle a = conjugateCocycle(P.alpha, mv.g);
      SubgroupData Hg = a.subgroup();
      std::vector<Elem> t;
      for (Elem x : P.tuple) t.push_back(G.mul(mv.g, x));
      return Presentation(std::move(Hg), std::move(a), std::move(t));
    }
  }
  throw InternalError("unknown move");
}

/// Characterization (a): stabilizer of Lambda in N_G(H).
inline std::vector<Elem> stabilizerK(const Presentation& P) { return multisetStabilizer(P.H, P.lambda()); }

/// Characterization (b): largest U, H <= U <= N_G(H), such that the cosets
/// Hub (u in U) occur equally often for every b.
inline std::vector<Elem> equalFrequencyK(const Presentation& P) {
  const Group& G = P.group();
  const CosetMultiset lambda = P.lambda();
  auto holds = [&](const std::vector<Elem>& U) {
    for (Elem b : P.H.transversal()) {
      const int c0 = lambda.count(b);
      for (Elem u : U)
        if (lambda.count(P.H.cosetOf(G.mul(u, b))) != c0) return false;
    }
    return true;
  };
  std::vector<std::vector<Elem>> good;
  for (auto& U : intermediateSubgroups(G, P.H.elements(), P.H.normalizer()))
    if (holds(U)) good.push_back(std::move(U));
  auto best = *std::max_element(good.begin(), good.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  for (const auto& U : good)
    if (!std::includes(best.begin(), best.end(), U.begin(), U.end()))
      throw InternalError("equal-frequency subgroups have no unique maximum");
  return best;
}

/// Characterization (c): largest U with Lambda = T_U x Lambda_0, found by
/// peeling U-orbits off a working copy of Lambda.
inline std::vector<Elem> factorizationK(const Presentation& P) {
  const Group& G = P.group();
  auto factors = [&](const std::vector<Elem>& U) {
    std::vector<Elem> transversal;
    for (Elem u : U)
      if (std::find_if(transversal.begin(), transversal.end(), [&](Elem t) { return P.H.cosetOf(t) == P.H.cosetOf(u); }) ==
          transversal.end())
        transversal.push_back(u);
    std::map<Elem, int> rest = P.lambda().counts;
    while (!rest.empty()) {
      const Elem c = rest.begin()->first;
      for (Elem t : transversal) {
        auto it = rest.find(P.H.cosetOf(G.mul(t, c)));
        if (it == rest.end()) return false;
        if (--it->second == 0) rest.erase(it);
      }
    }
    return true;
  };
  std::vector<std::vector<Elem>> good;
  for (auto& U : intermediateSubgroups(G, P.H.elements(), P.H.normalizer()))
    if (factors(U)) good.push_back(std::move(U));
  auto best = *std::max_element(good.begin(), good.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  for (const auto& U : good)
    if (!std::includes(best.begin(), best.end(), U.begin(), U.end()))
      throw InternalError("factorizable subgroups have no unique maximum");
  return best;
}

struct InvariantChain {
  std::vector<Elem> K, N, S, normalizer;
  int n = 1;                     // |mu_n|
  int cocycleModulus = 1;
  std::vector<int> sBarImage{1};
  std::map<Elem, int> action;    // s -> j(s)
  SubfieldDescriptor k;
  int wordBound = 4;
  bool stable = true;
};

namespace detail {

inline std::vector<Elem> computeN(const Presentation& P, int L, int n) {
  const auto& norm = P.H.normalizer();
  if (n == 1) return norm;
  std::vector<char> keep(norm.size(), 0);
  parallelFor(norm.size(), [&](std::size_t i) {
    keep[i] = normalizesBAlpha(norm[i], P.alpha, L) ? 1 : 0;
    return true;
  });
  std::vector<Elem> N;
  for (std::size_t i = 0; i < norm.size(); ++i)
    if (keep[i]) N.push_back(norm[i]);
  return N;
}

inline std::vector<Elem> intersectSorted(const std::vector<Elem>& a, const std::vector<Elem>& b) {
  std::vector<Elem> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::vector<Elem> conjugateSet(const Group& G, Elem x, const std::vector<Elem>& set) {
  std::vector<Elem> out;
  for (Elem s : set) out.push_back(G.conj(x, s));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// K, N, S = N n K, mu_n and the field k = Q(zeta_n)^{S-bar}.
inline InvariantChain computeKNS(const Presentation& P, int L = 4) {
  InvariantChain c;
  c.wordBound = L;
  c.normalizer = P.H.normalizer();
  c.K = stabilizerK(P);
  auto kb = equalFrequencyK(P);
  auto kc = factorizationK(P);
  if (kb != c.K || kc != c.K) throw InternalError("the three characterizations of K disagree");
  MuImage mu = imageMuN(P.alpha, L);
  c.n = mu.n;
  c.stable = mu.stable;
  c.cocycleModulus = P.alpha.modulus();
  c.N = detail::computeN(P, L, c.n);
  c.S = detail::intersectSorted(c.N, c.K);
  std::vector<int> js;
  for (Elem s : c.S) {
    int j = galoisActionOfS(s, P.alpha, c.n, L);
    c.action[s] = j;
    js.push_back(j);
  }
  c.sBarImage = unitClosure(c.n, js);
  c.k = SubfieldDescriptor(c.n, c.sBarImage);
  return c;
}

inline SubfieldDescriptor minimalField(const Presentation& P, int L = 4) { return computeKNS(P, L).k; }

struct Classification {
  bool divisionForm = false;
  bool stronglyVP = false;
  bool essentiallyVP = false;
  bool hNormal = false;
  bool equalFrequency = false;
  bool alphaInvariant = false;
};

inline Classification classify(const Presentation& P, int L = 4) {
  auto report = validatePresentation(P);
  if (!report.wellformed) throw PreconditionError("presentation is not well formed");
  if (!report.connected) throw PreconditionError("grading is not connected: the support does not generate G");
  const Group& G = P.group();
  auto chain = computeKNS(P, L);
  Classification c;
  c.divisionForm = static_cast<int>(chain.S.size()) == G.order();
  c.essentiallyVP = c.divisionForm;
  c.hNormal = P.H.isNormal();
  const auto lambda = P.lambda();
  c.equalFrequency = true;
  for (Elem b : P.H.transversal())
    if (lambda.count(b) != lambda.count(0)) c.equalFrequency = false;
  c.alphaInvariant = false;
  if (c.hNormal) {
    c.alphaInvariant = true;
    for (Elem g = 0; g < G.order() && c.alphaInvariant; ++g) {
      Cocycle conj = conjugateCocycle(P.alpha, g);
      Cocycle aligned(P.H, conj.modulus(), conj.exps());
      if (!isCohomologous(aligned, P.alpha)) c.alphaInvariant = false;
    }
  }
  c.stronglyVP = c.hNormal && c.equalFrequency && c.alphaInvariant;
  return c;
}

/// (g1^-1 h1 g2, ..., gn^-1 hn g1)
inline std::vector<Elem> derivative(const Group& G, const std::vector<Elem>& tuple, const std::vector<Elem>& along) {
  if (along.size() != tuple.size()) throw PreconditionError("derivative needs one H element per tuple entry");
  const std::size_t n = tuple.size();
  std::vector<Elem> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = G.mul(G.mul(G.inv(tuple[i]), along[i]), tuple[(i + 1) % n]);
  return out;
}

/// Cyclic sequence of sets g_i^-1 H g_{i+1}.
inline std::vector<std::vector<Elem>> fullDerivative(const SubgroupData& H, const std::vector<Elem>& tuple) {
  const Group& G = H.group();
  const std::size_t n = tuple.size();
  std::vector<std::vector<Elem>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (Elem h : H.elements()) out[i].push_back(G.mul(G.mul(G.inv(tuple[i]), h), tuple[(i + 1) % n]));
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

/// Minimal theta in N_G(H) with H theta g_i = H ghat_i for all i. The search
/// is exhaustive; its outcome is cross-checked against derivative equality.
inline std::optional<Elem> findTheta(const SubgroupData& H, const std::vector<Elem>& tuple, const std::vector<Elem>& tupleHat) {
  if (tuple.size() != tupleHat.size() || tuple.empty()) return std::nullopt;
  const Group& G = H.group();
  std::optional<Elem> found;
  for (Elem theta : H.normalizer()) {
    bool ok = true;
    for (std::size_t i = 0; i < tuple.size() && ok; ++i) ok = H.cosetOf(G.mul(theta, tuple[i])) == H.cosetOf(tupleHat[i]);
    if (ok) {
      found = theta;
      break;
    }
  }
  const bool equal = fullDerivative(H, tuple) == fullDerivative(H, tupleHat);
  if (equal != found.has_value()) throw InternalError("derivative criterion disagrees with the theta search");
  if (found) {
    const Elem direct = H.cosetOf(G.mul(tupleHat[0], G.inv(tuple[0])));
    if (H.cosetOf(*found) != direct) throw InternalError("theta differs from ghat_1 g_1^-1 modulo H");
  }
  return found;
}

/// Some g in G with H2 = gH1g^-1, Lambda2 = g Lambda1 and alpha2 ~ alpha1^(g).
inline std::optional<Elem> isoWitness(const Presentation& P1, const Presentation& P2) {
  if (!(P1.group() == P2.group())) throw PreconditionError("presentations have different ambient groups");
  if (P1.size() != P2.size() || P1.H.order() != P2.H.order()) return std::nullopt;
  const Group& G = P1.group();
  const CosetMultiset target = P2.lambda();
  std::optional<Elem> result;
  std::mutex lock;
  parallelFor(static_cast<std::size_t>(G.order()), [&](std::size_t gi) {
    const Elem g = static_cast<Elem>(gi);
    Cocycle conj = conjugateCocycle(P1.alpha, g);
    if (conj.subgroup().elements() != P2.H.elements()) return true;
    CosetMultiset moved;
    for (Elem x : P1.tuple) ++moved.counts[P2.H.cosetOf(G.mul(g, x))];
    if (!(moved == target)) return true;
    Cocycle aligned(P2.H, conj.modulus(), conj.exps());
    if (!isCohomologous(aligned, P2.alpha)) return true;
    std::lock_guard<std::mutex> guard(lock);
    if (!result || g < *result) result = g;
    return true;
  });
  return result;
}

inline bool isoTest(const Presentation& P1, const Presentation& P2) { return isoWitness(P1, P2).has_value(); }

/// Lambda = T_K x Lambda_0 data for a presentation whose e-coset has
/// maximal multiplicity.
struct Factorization {
  std::vector<Elem> transversalK;                 // S-representatives first
  std::vector<std::pair<Elem, int>> lambda0;      // (representative, multiplicity), ordered
};

namespace detail {

/// Orders Lambda_0 and T_K as in the normal form.
inline Factorization factorize(const SubgroupData& H, const CosetMultiset& lambda, const std::vector<Elem>& K,
                               const std::vector<Elem>& S) {
  const Group& G = H.group();
  Factorization f;
  std::vector<Elem> tK;
  for (Elem k : K)
    if (H.cosetOf(k) == k) tK.push_back(k);
  std::stable_sort(tK.begin(), tK.end(), [&](Elem a, Elem b) {
    const bool sa = std::binary_search(S.begin(), S.end(), a), sb = std::binary_search(S.begin(), S.end(), b);
    if (sa != sb) return sa;
    return a < b;
  });
  f.transversalK = tK;

  // one representative coset per K-orbit
  std::set<Elem> covered;
  std::vector<Elem> reps;
  for (const auto& [coset, mult] : lambda.counts) {
    if (covered.count(coset)) continue;
    reps.push_back(coset);
    for (Elem k : tK) covered.insert(H.cosetOf(G.mul(k, coset)));
  }
  // relation classes: g ~ g' iff g' in H g H, among distinct tuple cosets
  std::map<Elem, Elem> classMin;
  std::map<Elem, int> classSize;
  for (const auto& [c, mult] : lambda.counts) {
    Elem rep = c;
    for (const auto& [d, m2] : lambda.counts) {
      bool related = false;
      for (Elem h : H.elements())
        if (H.cosetOf(G.mul(c, h)) == d) {
          related = true;
          break;
        }
      if (related) rep = std::min(rep, d);
    }
    classMin[c] = rep;
    ++classSize[rep];
  }
  auto key = [&](Elem c) {
    int cat;
    if (c == 0) cat = 0;
    else if (H.normalizes(c)) cat = 1;
    else if (classSize[classMin[c]] == 1) cat = 2;
    else cat = 3;
    return std::make_tuple(cat, cat == 3 ? classMin[c] : 0, c);
  };
  std::sort(reps.begin(), reps.end(), [&](Elem a, Elem b) { return key(a) < key(b); });
  for (Elem r : reps) f.lambda0.emplace_back(r, lambda.count(r));
  return f;
}

}  // namespace detail

inline Factorization factorization(const Presentation& P, const InvariantChain& chain) {
  return detail::factorize(P.H, P.lambda(), chain.K, chain.S);
}

/// Canonical representative of the move orbit of P.
inline Presentation normalize(const Presentation& P, int L = 4) {
  auto report = validatePresentation(P);
  if (!report.wellformed) throw PreconditionError("cannot normalize a malformed presentation");
  const Group& G = P.group();
  const InvariantChain chain = computeKNS(P, L);
  const CosetMultiset lambda = P.lambda();
  int best = 0;
  for (const auto& [c, m] : lambda.counts) best = std::max(best, m);

  std::optional<Presentation> winner;
  for (const auto& [coset, mult] : lambda.counts) {
    if (mult != best) continue;
    const Elem x = coset;
    const Elem xi = G.inv(x);
    Presentation moved = applyMove(P, Move::translate(xi));
    for (auto& g : moved.tuple) g = moved.H.cosetOf(g);
    // K and S transport by conjugation with x^-1
    auto K = detail::conjugateSet(G, xi, chain.K);
    auto S = detail::conjugateSet(G, xi, chain.S);
    Factorization f = detail::factorize(moved.H, moved.lambda(), K, S);
    std::vector<Elem> tuple;
    for (auto [g, d] : f.lambda0)
      for (Elem t : f.transversalK)
        for (int r = 0; r < d; ++r) tuple.push_back(moved.H.cosetOf(G.mul(t, g)));
    if (static_cast<int>(tuple.size()) != P.size()) throw InternalError("normal form changed the tuple length");
    Presentation cand(moved.H, canonicalCocycle(moved.alpha), std::move(tuple));
    auto rank = [](const Presentation& Q) { return std::tie(Q.H.elements(), Q.tuple, Q.alpha.exps()); };
    if (!winner || rank(cand) < rank(*winner)) winner = std::move(cand);
  }
  return *winner;
}

}  // namespace gforge
