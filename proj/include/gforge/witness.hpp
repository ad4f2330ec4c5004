#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "gforge/cyclo.hpp"
#include "gforge/error.hpp"
#include "gforge/galgebra.hpp"
#include "gforge/polynomial.hpp"
#include "gforge/qlinalg.hpp"
#include "gforge/twisted.hpp"

namespace gforge {

/// E0 and its framed, variable-level form E1 = Z1 at the basic evaluation.
struct WitnessBundle {
  std::vector<std::size_t> core;  // block circuits joined by bridges
  std::vector<std::size_t> E0;    // core between two non-designated e-elements
  std::vector<std::size_t> e0Designated, e0Bridges;
  std::vector<std::size_t> E1;    // E0 with frames around designated elements
  std::vector<std::size_t> designated, frames, bridges, extras;  // positions in E1
  std::vector<int> varOf;         // E1 position -> variable id; designated ids are 0..d_e-1
  GradedPolynomial Z1;
  GradedPolynomial p1;
  int de = 0;

  /// Value of each variable in Z1 at the basic evaluation.
  Assignment basicAssignment() const {
    Assignment a;
    for (std::size_t p = 0; p < E1.size(); ++p) a[varOf[p]] = E1[p];
    return a;
  }
};

namespace detail {

/// Eulerian circuit of the complete digraph with loops on verts, always
/// leaving by the smallest unused edge; returns the visited vertex sequence.
inline std::vector<int> completeCircuit(const std::vector<int>& verts) {
  const std::size_t d = verts.size();
  std::vector<std::size_t> nextOut(d, 0);
  std::vector<std::size_t> stack{0}, circuit;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    if (nextOut[v] < d) stack.push_back(nextOut[v]++);
    else {
      circuit.push_back(v);
      stack.pop_back();
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  std::vector<int> out;
  for (auto v : circuit) out.push_back(verts[v]);
  return out;
}

inline std::vector<std::vector<int>> allPermutations(int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> p(d);
  std::iota(p.begin(), p.end(), 0);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline int permutationSign(const std::vector<int>& p) {
  int sign = 1;
  std::vector<char> seen(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

}  // namespace detail

/// Degree-e element u_x (x) e_ab for a, b in one block.
inline std::size_t eElement(const GradedAlgebra& A, int a, int b) {
  const auto& P = A.presentation();
  const Group& G = A.group();
  const int x = P.H.localIndex(G.mul(P.tuple[a], G.inv(P.tuple[b])));
  if (x < 0) throw PreconditionError("rows " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " lie in different blocks");
  return A.index(x, a, b);
}

inline WitnessBundle buildWitness(const GradedAlgebra& A, const Caps& caps = defaultCaps()) {
  WitnessBundle w;
  const auto& blocks = A.blocks();
  for (const auto& B : blocks) w.de += static_cast<int>(B.size() * B.size());
  if (w.de != A.dimOf(0)) throw InternalError("e-blocks do not account for the identity component");
  if (static_cast<std::size_t>(w.de) > caps.designated)
    throw BudgetError("witness needs " + std::to_string(w.de) + " designated variables; cap is " + std::to_string(caps.designated));

  std::vector<char> isDesignated;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b > 0) {
      auto c = A.bridge(w.core.back(), eElement(A, blocks[b][0], blocks[b][0]));
      if (!c) throw InternalError("no bridge between consecutive blocks");
      w.core.push_back(*c);
      isDesignated.push_back(0);
    }
    auto walk = detail::completeCircuit(blocks[b]);
    for (std::size_t s = 0; s + 1 < walk.size(); ++s) {
      w.core.push_back(eElement(A, walk[s], walk[s + 1]));
      isDesignated.push_back(1);
    }
  }
  const int first = blocks.front()[0], last = blocks.back()[0];
  w.E0.push_back(eElement(A, first, first));
  for (std::size_t p = 0; p < w.core.size(); ++p) {
    (isDesignated[p] ? w.e0Designated : w.e0Bridges).push_back(w.E0.size());
    w.E0.push_back(w.core[p]);
  }
  w.E0.push_back(eElement(A, last, last));

  // frames: a diagonal e-element on both sides of every designated element
  int nextVar = w.de, nextDesignated = 0;
  auto push = [&](std::size_t value, std::vector<std::size_t>& kind, int var) {
    kind.push_back(w.E1.size());
    w.E1.push_back(value);
    w.varOf.push_back(var);
  };
  auto frame = [&](int row) {
    if (!w.frames.empty() && w.frames.back() + 1 == w.E1.size()) return;
    push(eElement(A, row, row), w.frames, nextVar++);
  };
  for (std::size_t p = 0; p < w.E0.size(); ++p) {
    const auto b = A.basis(w.E0[p]);
    if (std::binary_search(w.e0Designated.begin(), w.e0Designated.end(), p)) {
      frame(b.i);
      push(w.E0[p], w.designated, nextDesignated++);
      frame(b.j);
    } else if (std::binary_search(w.e0Bridges.begin(), w.e0Bridges.end(), p)) {
      push(w.E0[p], w.bridges, nextVar++);
    } else {
      push(w.E0[p], w.extras, nextVar++);
    }
  }

  for (std::size_t p = 0; p < w.E1.size(); ++p) w.Z1.addVar(w.varOf[p], A.degree(w.E1[p]));
  w.p1 = w.Z1;
  w.Z1.addMonomial(CycScalar::one(), w.varOf);
  for (const auto& sigma : detail::allPermutations(w.de)) {
    auto seq = w.varOf;
    for (int k = 0; k < w.de; ++k) seq[w.designated[k]] = sigma[k];
    w.p1.addMonomial(CycScalar::integer(detail::permutationSign(sigma)), std::move(seq));
  }
  return w;
}

struct E0Conditions {
  bool separatedByE = true;      // same-block designated elements separated only by e-elements
  bool blocksInOrder = true;     // each block visited once, in tuple order
  bool nonDesignatedEnds = true; // starts and ends with non-designated e-elements
  bool bridgesCompliant = true;  // bridge degrees follow the relation of the blocks
  bool nonzero = true;
  bool coversDelta = true;
  bool all() const { return separatedByE && blocksInOrder && nonDesignatedEnds && bridgesCompliant && nonzero && coversDelta; }
};

inline E0Conditions checkE0(const GradedAlgebra& A, const WitnessBundle& w) {
  E0Conditions c;
  const auto& P = A.presentation();
  auto blockAt = [&](std::size_t p) { return A.blockOf(A.basis(w.E0[p]).i); };
  const auto& D = w.e0Designated;
  for (std::size_t x = 0; x < D.size(); ++x)
    for (std::size_t y = x + 1; y < D.size(); ++y) {
      if (blockAt(D[x]) != blockAt(D[y])) continue;
      for (std::size_t p = D[x] + 1; p < D[y]; ++p)
        if (A.degree(w.E0[p]) != 0) c.separatedByE = false;
    }
  for (std::size_t x = 0; x + 1 < D.size(); ++x) {
    const int b0 = blockAt(D[x]), b1 = blockAt(D[x + 1]);
    if (b1 != b0 && b1 != b0 + 1) c.blocksInOrder = false;
  }
  if (D.empty() || blockAt(D.front()) != 0 || blockAt(D.back()) + 1 != static_cast<int>(A.blocks().size())) c.blocksInOrder = false;
  auto designatedAt = [&](std::size_t p) { return std::binary_search(D.begin(), D.end(), p); };
  if (designatedAt(0) || designatedAt(w.E0.size() - 1) || A.degree(w.E0.front()) != 0 || A.degree(w.E0.back()) != 0)
    c.nonDesignatedEnds = false;
  for (auto p : w.e0Bridges) {
    const auto b = A.basis(w.E0[p]);
    const Elem d = A.degree(w.E0[p]);
    switch (A.relate(b.i, b.j)) {
      case Relation::SameBlock: c.bridgesCompliant = c.bridgesCompliant && d == 0; break;
      case Relation::RelatedDistinct: c.bridgesCompliant = c.bridgesCompliant && d != 0 && P.H.contains(d); break;
      case Relation::Unrelated: c.bridgesCompliant = c.bridgesCompliant && !P.H.contains(d); break;
    }
  }
  std::optional<AlgElement> prod;
  for (auto idx : w.E0) {
    auto x = AlgElement::basis(A, idx);
    prod = prod ? multiply(*prod, x) : x;
  }
  c.nonzero = prod && !prod->isZero();
  std::vector<std::size_t> seen;
  for (auto p : D) seen.push_back(w.E0[p]);
  std::sort(seen.begin(), seen.end());
  c.coversDelta = std::adjacent_find(seen.begin(), seen.end()) == seen.end() && seen == A.homogeneous(0);
  return c;
}

/// Completes the designated values of Z_{1,sigma} (position k holds X_sigma(k))
/// with free values making the product nonzero; the search is an exact
/// dynamic program over the column reached after each position.
inline std::optional<Assignment> nonvanishingWitness(const GradedAlgebra& A, const WitnessBundle& w, const std::vector<int>& sigma) {
  const std::size_t L = w.E1.size();
  std::vector<std::vector<std::size_t>> domain(L);
  for (std::size_t p = 0; p < L; ++p) domain[p] = A.homogeneous(A.degree(w.E1[p]));
  for (int k = 0; k < w.de; ++k) domain[w.designated[k]] = {w.E1[w.designated[sigma[k]]]};
  const int n = A.n();
  // choice[p][col] = (value, previous column) of the first way to end at col
  std::vector<std::vector<std::optional<std::pair<std::size_t, int>>>> choice(L, std::vector<std::optional<std::pair<std::size_t, int>>>(n));
  for (auto idx : domain[0])
    if (!choice[0][A.basis(idx).j]) choice[0][A.basis(idx).j] = std::make_pair(idx, -1);
  for (std::size_t p = 1; p < L; ++p)
    for (int col = 0; col < n; ++col) {
      if (!choice[p - 1][col]) continue;
      for (auto idx : domain[p]) {
        const auto b = A.basis(idx);
        if (b.i == col && !choice[p][b.j]) choice[p][b.j] = std::make_pair(idx, col);
      }
    }
  int col = -1;
  for (int c = 0; c < n && col < 0; ++c)
    if (choice[L - 1][c]) col = c;
  if (col < 0) return std::nullopt;
  std::vector<std::size_t> values(L);
  for (std::size_t p = L; p-- > 0;) {
    values[p] = choice[p][col]->first;
    col = choice[p][col]->second;
  }
  Assignment a;
  for (std::size_t p = 0; p < L; ++p) {
    const bool fixed = std::find(w.designated.begin(), w.designated.end(), p) != w.designated.end();
    if (!fixed) a[w.varOf[p]] = values[p];
  }
  for (int k = 0; k < w.de; ++k) a[k] = w.E1[w.designated[k]];
  return a;
}

/// All sigma (lexicographic) whose monomial Z_{1,sigma} has a nonzero value at
/// the basic designated evaluation.
inline std::vector<std::vector<int>> nonvanishingSet(const GradedAlgebra& A, const WitnessBundle& w,
                                                     unsigned long long budget = 10'000'000ULL) {
  unsigned long long count = 1;
  for (int r = 2; r <= w.de; ++r) count *= r;
  if (count > budget) throw BudgetError("nonvanishing search over " + std::to_string(count) + " permutations exceeds budget");
  std::vector<std::vector<int>> out;
  for (const auto& sigma : detail::allPermutations(w.de))
    if (nonvanishingWitness(A, w, sigma)) out.push_back(sigma);
  return out;
}

/// A binomial x_{h1}..x_{hr} - zeta x_{h_tau(1)}..x_{h_tau(r)} whose ratio
/// zeta_m^ratio has exact order n.
struct BinomialDatum {
  std::vector<Elem> word;
  std::vector<int> perm;
  int ratio = 0;     // exponent modulo the cocycle modulus
  int modulus = 1;
};

/// First primitive witness in (length, word, permutation) order.
inline std::optional<BinomialDatum> primitiveBinomial(const Cocycle& alpha, int n, int L = 4) {
  const int m = alpha.modulus(), k = alpha.size();
  if (n <= 1 || m % n != 0) return std::nullopt;
  const int step = m / n;
  for (int r = 2; r <= L; ++r) {
    const auto& perms = detail::nonIdentityPerms(r);
    std::vector<int> word(r, 0);
    while (true) {
      int prod = 0;
      for (int h : word) prod = alpha.lmul(prod, h);
      for (const auto& p : perms) {
        int q = 0;
        for (int i = 0; i < r; ++i) q = alpha.lmul(q, word[p[i]]);
        if (q != prod) continue;
        const int x = localRatio(alpha, word, p);
        if (x % step == 0 && std::gcd(x / step, n) == 1) {
          BinomialDatum d;
          for (int h : word) d.word.push_back(alpha.elem(h));
          d.perm = p;
          d.ratio = x;
          d.modulus = m;
          return d;
        }
      }
      int pos = r - 1;
      while (pos >= 0 && ++word[pos] == k) word[pos--] = 0;
      if (pos < 0) break;
    }
  }
  return std::nullopt;
}

/// beta_tau on variables firstId.. with the given scalar.
inline GradedPolynomial binomialPolynomial(const BinomialDatum& d, const CycScalar& zeta, int firstId = 0) {
  GradedPolynomial p;
  const int r = static_cast<int>(d.word.size());
  std::vector<int> ids, swapped;
  for (int i = 0; i < r; ++i) {
    p.addVar(firstId + i, d.word[i]);
    ids.push_back(firstId + i);
  }
  for (int i = 0; i < r; ++i) swapped.push_back(firstId + d.perm[i]);
  p.addMonomial(CycScalar::one(), ids);
  p.addMonomial(-zeta, swapped);
  return p;
}

/// m(X): one binomial factor on a fresh variable copy per distinct j in the
/// image of S, with scalar s(zeta) = zeta^j for the witness ratio zeta.
inline GradedPolynomial buildMProduct(const BinomialDatum& d, int n, const std::vector<int>& sBarImage) {
  const int step = d.modulus / n;
  if (n < 1 || d.modulus % n != 0 || d.ratio % step != 0 || std::gcd(d.ratio / step, n) != 1)
    throw PreconditionError("binomial witness is not primitive of order " + std::to_string(n));
  const int a = d.ratio / step;
  const int r = static_cast<int>(d.word.size());
  std::vector<int> js = sBarImage;
  std::sort(js.begin(), js.end());
  js.erase(std::unique(js.begin(), js.end()), js.end());
  std::optional<GradedPolynomial> m;
  for (std::size_t c = 0; c < js.size(); ++c) {
    auto factor = binomialPolynomial(d, CycScalar::root(n, static_cast<long long>(a) * js[c]), static_cast<int>(c) * r);
    m = m ? *m * factor : factor;
  }
  return m->combined();
}

/// p = sum_i zeta_n^i p_i with every p_i over k (i < [Q(zeta_n) : k]).
inline std::vector<GradedPolynomial> decomposeOverField(const GradedPolynomial& p, const SubfieldDescriptor& k) {
  const int n = k.n;
  const int phi = eulerPhi(n);
  const int d = phi / k.degree();
  const auto kb = k.qBasis();
  // columns: b_l zeta^i in power-basis coordinates of Q(zeta_n)
  std::vector<std::vector<mpq_class>> cols;
  for (int i = 0; i < d; ++i)
    for (const auto& b : kb) cols.push_back((b * CycScalar::root(n, i)).promote(n).coeffs());
  std::vector<GradedPolynomial> parts(d);
  for (auto& part : parts)
    for (const auto& v : p.vars()) part.addVar(v.id, v.degree);
  const GradedPolynomial q = p.combined();
  for (const auto& mono : q.monomials()) {
    if (n % mono.coeff.modulus() != 0 && !(mono.coeff.isRational()))
      throw PreconditionError("coefficient " + mono.coeff.str() + " is not in Q(zeta_" + std::to_string(n) + ")");
    const CycScalar c = mono.coeff.isRational() ? CycScalar::rational(mono.coeff.constantTerm(), n) : mono.coeff.promote(n);
    auto x = solveRational(cols, c.coeffs());
    if (!x) throw InternalError("powers of zeta do not span Q(zeta_n) over k");
    for (int i = 0; i < d; ++i) {
      CycScalar kappa = CycScalar::zero(n);
      for (std::size_t l = 0; l < kb.size(); ++l) kappa += CycScalar::rational((*x)[i * kb.size() + l], n) * kb[l];
      parts[i].addMonomial(kappa, mono.seq);
    }
  }
  return parts;
}

}  // namespace gforge
