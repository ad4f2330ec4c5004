#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gforge/cyclo.hpp"
#include "gforge/error.hpp"
#include "gforge/group.hpp"
#include "gforge/parallel.hpp"
#include "gforge/zmod.hpp"

namespace gforge {

/// Normalized 2-cocycle on H with values in mu_m, stored as exponents:
/// alpha(a, b) = zeta_m^exps[a][b]. Indices are positions in H.elements().
class Cocycle {
public:
  Cocycle() = default;

  Cocycle(SubgroupData H, int m, std::vector<int> exps) : H_(std::move(H)), m_(m), exps_(std::move(exps)) {
    if (m <= 0) throw PreconditionError("cocycle modulus must be positive");
    const int k = H_.order();
    if (static_cast<int>(exps_.size()) != k * k)
      throw PreconditionError("cocycle table must be " + std::to_string(k) + "x" + std::to_string(k));
    for (auto& x : exps_) x = modPositive(x, m_);
    lmul_.resize(static_cast<std::size_t>(k) * k);
    linv_.resize(k);
    const Group& G = H_.group();
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        int ab = H_.localIndex(G.mul(H_.elements()[a], H_.elements()[b]));
        lmul_[a * k + b] = ab;
        if (ab == 0) linv_[a] = b;
      }
  }

  static Cocycle fromRows(SubgroupData H, int m, const std::vector<std::vector<int>>& rows) {
    const int k = H.order();
    if (static_cast<int>(rows.size()) != k) throw PreconditionError("cocycle table has wrong number of rows");
    std::vector<int> flat;
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != k) throw PreconditionError("cocycle table row has wrong length");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return Cocycle(std::move(H), m, std::move(flat));
  }

  static Cocycle trivial(SubgroupData H, int m = 1) {
    const int k = H.order();
    return Cocycle(std::move(H), m, std::vector<int>(static_cast<std::size_t>(k) * k, 0));
  }

  const SubgroupData& subgroup() const { return H_; }
  int modulus() const { return m_; }
  int size() const { return H_.order(); }
  const std::vector<int>& exps() const { return exps_; }

  int at(int a, int b) const { return exps_[static_cast<std::size_t>(a) * size() + b]; }
  int lmul(int a, int b) const { return lmul_[static_cast<std::size_t>(a) * size() + b]; }
  int linv(int a) const { return linv_[a]; }
  Elem elem(int local) const { return H_.elements()[local]; }
  int local(Elem g) const {
    int i = H_.localIndex(g);
    if (i < 0) throw PreconditionError("element " + std::to_string(g) + " is not in H");
    return i;
  }
  /// Exponent of alpha(g, h) for parent-group elements of H.
  int operator()(Elem g, Elem h) const { return at(local(g), local(h)); }

  std::vector<std::vector<int>> rows() const {
    std::vector<std::vector<int>> out(size());
    for (int a = 0; a < size(); ++a) out[a].assign(exps_.begin() + a * size(), exps_.begin() + (a + 1) * size());
    return out;
  }

  /// Same class data expressed with exponents modulo a multiple M of m.
  Cocycle promote(int M) const {
    if (M % m_ != 0) throw PreconditionError("cannot promote cocycle modulus " + std::to_string(m_) + " to " + std::to_string(M));
    std::vector<int> e = exps_;
    for (auto& x : e) x *= M / m_;
    return Cocycle(H_, M, std::move(e));
  }

  bool operator==(const Cocycle& o) const { return m_ == o.m_ && H_.elements() == o.H_.elements() && exps_ == o.exps_; }
  bool operator<(const Cocycle& o) const {
    return std::tie(m_, H_.elements(), exps_) < std::tie(o.m_, o.H_.elements(), o.exps_);
  }

private:
  SubgroupData H_;
  int m_ = 1;
  std::vector<int> exps_;
  std::vector<int> lmul_;
  std::vector<int> linv_;
};

inline bool validateCocycle(const Cocycle& alpha) {
  const int k = alpha.size(), m = alpha.modulus();
  for (int h = 0; h < k; ++h)
    if (alpha.at(0, h) != 0 || alpha.at(h, 0) != 0) return false;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const int ab = alpha.lmul(a, b);
      for (int c = 0; c < k; ++c) {
        const int lhs = alpha.at(a, b) + alpha.at(ab, c);
        const int rhs = alpha.at(b, c) + alpha.at(a, alpha.lmul(b, c));
        if ((lhs - rhs) % m != 0) return false;
      }
    }
  return true;
}

/// Exponent and product of u_{h1} ... u_{hr} folded left to right (local indices).
inline std::pair<int, int> localWordValue(const Cocycle& alpha, std::span<const int> word) {
  int acc = 0, e = 0;
  for (int h : word) {
    e += alpha.at(acc, h);
    acc = alpha.lmul(acc, h);
  }
  return {modPositive(e, alpha.modulus()), acc};
}

/// word_value on parent-group elements: (exponent, product element).
inline std::pair<int, Elem> wordValue(const Cocycle& alpha, std::span<const Elem> word) {
  std::vector<int> w;
  for (Elem g : word) w.push_back(alpha.local(g));
  auto [e, p] = localWordValue(alpha, w);
  return {e, alpha.elem(p)};
}

/// exp(word) - exp(tau.word) where (tau.word)_i = word[perm[i]].
inline int binomialRatio(const Cocycle& alpha, std::span<const Elem> word, std::span<const int> perm) {
  if (perm.size() != word.size()) throw PreconditionError("permutation length differs from word length");
  std::vector<Elem> permuted;
  for (int p : perm) {
    if (p < 0 || p >= static_cast<int>(word.size())) throw PreconditionError("invalid permutation");
    permuted.push_back(word[p]);
  }
  auto [e1, p1] = wordValue(alpha, word);
  auto [e2, p2] = wordValue(alpha, permuted);
  if (p1 != p2) throw PreconditionError("binomial ratio needs equal products");
  return modPositive(e1 - e2, alpha.modulus());
}

/// Whether x_{h1}..x_{hr} - zeta x_{h_tau(1)}..x_{h_tau(r)} vanishes on F^alpha H,
/// where zeta = zeta_{zetaModulus}^{zetaExp}.
inline bool isBinomialIdentity(const Cocycle& alpha, std::span<const Elem> word, std::span<const int> perm, int zetaExp,
                               int zetaModulus) {
  const int r = binomialRatio(alpha, word, perm);
  const long long L = std::lcm(alpha.modulus(), zetaModulus);
  return modPositive(static_cast<long long>(r) * (L / alpha.modulus()) - static_cast<long long>(zetaExp) * (L / zetaModulus), L) == 0;
}

namespace detail {

inline const std::vector<std::vector<int>>& nonIdentityPerms(int r) {
  static std::mutex lock;
  static std::map<int, std::vector<std::vector<int>>> cache;
  std::lock_guard<std::mutex> guard(lock);
  auto& entry = cache[r];
  if (entry.empty()) {
    std::vector<int> p(r);
    std::iota(p.begin(), p.end(), 0);
    while (std::next_permutation(p.begin(), p.end())) entry.push_back(p);
  }
  return entry;
}

}  // namespace detail

/// Visits every (word, tau) with word of length exactly r over H (local
/// indices), tau != id and prod(word) = prod(tau.word). Work is split over
/// the first letter; visit(acc, word, perm) returns false to stop early.
template <class Acc, class Visit, class Merge>
Acc reduceBinomials(const Cocycle& alpha, int r, Acc init, Visit visit, Merge merge) {
  const int k = alpha.size();
  const auto& perms = detail::nonIdentityPerms(r);
  std::mutex lock;
  Acc total = init;
  parallelFor(static_cast<std::size_t>(k), [&](std::size_t first) {
    Acc acc = init;
    std::vector<int> word(r, 0), permuted(r);
    word[0] = static_cast<int>(first);
    bool go = true;
    while (go) {
      int prod = 0;
      for (int h : word) prod = alpha.lmul(prod, h);
      for (const auto& p : perms) {
        int q = 0;
        for (int i = 0; i < r; ++i) q = alpha.lmul(q, word[p[i]]);
        if (q != prod) continue;
        if (!visit(acc, std::span<const int>(word), std::span<const int>(p))) {
          go = false;
          break;
        }
      }
      if (!go) break;
      int pos = r - 1;
      while (pos >= 1 && ++word[pos] == k) word[pos--] = 0;
      if (pos < 1) break;
    }
    std::lock_guard<std::mutex> guard(lock);
    merge(total, acc);
    return go;
  });
  return total;
}

inline int localRatio(const Cocycle& alpha, std::span<const int> word, std::span<const int> perm) {
  int acc = 0, e = 0, acc2 = 0, e2 = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    e += alpha.at(acc, word[i]);
    acc = alpha.lmul(acc, word[i]);
    const int h = word[perm[i]];
    e2 += alpha.at(acc2, h);
    acc2 = alpha.lmul(acc2, h);
  }
  return modPositive(e - e2, alpha.modulus());
}

struct MuImage {
  int n = 1;               // order of the generated subgroup of mu_m
  int generatorExp = 0;    // gcd of all ratio exponents with m, i.e. m / n
  int wordBound = 4;
  bool stable = true;      // same subgroup at bound L-1 and L
};

/// Subgroup of mu_m generated by binomial ratios of words of length <= L.
inline MuImage imageMuN(const Cocycle& alpha, int L = 4) {
  if (L < 2) throw PreconditionError("word bound must be at least 2");
  const int m = alpha.modulus();
  int g = m, gBefore = m;
  for (int r = 2; r <= L && g != 1; ++r) {
    if (r == L) gBefore = g;
    int found = reduceBinomials(
        alpha, r, g,
        [&](int& acc, std::span<const int> w, std::span<const int> p) {
          acc = std::gcd(acc, localRatio(alpha, w, p));
          return acc != 1;
        },
        [](int& a, int b) { a = std::gcd(a, b); });
    g = std::gcd(g, found);
    if (r < L) gBefore = g;
  }
  MuImage out;
  out.n = m / g;
  out.generatorExp = g;
  out.wordBound = L;
  out.stable = gBefore == g;
  return out;
}

/// alpha^g(h1, h2) = alpha(g^-1 h1 g, g^-1 h2 g), a cocycle on gHg^-1.
inline Cocycle conjugateCocycle(const Cocycle& alpha, Elem g) {
  const SubgroupData& H = alpha.subgroup();
  const Group& G = H.group();
  SubgroupData Hg = H.conjugate(g);
  const int k = Hg.order();
  std::vector<int> pre(k);
  for (int a = 0; a < k; ++a) pre[a] = alpha.local(G.conj(G.inv(g), Hg.elements()[a]));
  std::vector<int> e(static_cast<std::size_t>(k) * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) e[a * k + b] = alpha.at(pre[a], pre[b]);
  return Cocycle(std::move(Hg), alpha.modulus(), std::move(e));
}

/// alpha^[j]: the Galois automorphism zeta_m -> zeta_m^j applied to values.
inline Cocycle galoisCocycle(const Cocycle& alpha, int j) {
  const int m = alpha.modulus();
  if (m > 1 && std::gcd(modPositive(j, m), m) != 1) throw PreconditionError(std::to_string(j) + " is not a unit mod " + std::to_string(m));
  std::vector<int> e = alpha.exps();
  for (auto& x : e) x = modPositive(static_cast<long long>(x) * j, m);
  return Cocycle(alpha.subgroup(), m, std::move(e));
}

struct CocycleTransform {
  enum class Mode { Conjugate, Galois } mode = Mode::Conjugate;
  int value = 0;  // g for Conjugate, j for Galois
};

inline Cocycle transformCocycle(const Cocycle& alpha, CocycleTransform t) {
  if (t.mode == CocycleTransform::Mode::Galois) return galoisCocycle(alpha, t.value);
  if (t.value < 0 || t.value >= alpha.subgroup().group().order() || !alpha.subgroup().normalizes(t.value))
    throw PreconditionError("element " + std::to_string(t.value) + " does not normalize H");
  return conjugateCocycle(alpha, t.value);
}

/// alpha + delta f with (delta f)(a, b) = f(a) + f(b) - f(ab); f on local indices, f(e) ignored.
inline Cocycle shiftByCoboundary(const Cocycle& alpha, const std::vector<long long>& f) {
  const int k = alpha.size();
  std::vector<int> e(static_cast<std::size_t>(k) * k);
  auto fv = [&](int a) { return a == 0 ? 0LL : f[a]; };
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      e[a * k + b] = modPositive(alpha.at(a, b) + fv(a) + fv(b) - fv(alpha.lmul(a, b)), alpha.modulus());
  return Cocycle(alpha.subgroup(), alpha.modulus(), std::move(e));
}

namespace detail {

/// Coboundary map f -> delta f on pairs (a, b) with a, b != e, over Z/M.
/// Only the local multiplication table matters, so solvers are shared.
inline std::shared_ptr<const zmod::Diagonalization> coboundarySolver(const Cocycle& shape, long long M) {
  static std::mutex lock;
  static std::map<std::pair<std::vector<int>, long long>, std::shared_ptr<const zmod::Diagonalization>> cache;
  const int k = shape.size();
  std::vector<int> table(static_cast<std::size_t>(k) * k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) table[a * k + b] = shape.lmul(a, b);
  auto key = std::make_pair(table, M);
  {
    std::lock_guard<std::mutex> guard(lock);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const int cols = std::max(k - 1, 0);
  std::vector<std::vector<long long>> A;
  for (int a = 1; a < k; ++a)
    for (int b = 1; b < k; ++b) {
      std::vector<long long> row(cols, 0);
      row[a - 1] += 1;
      row[b - 1] += 1;
      const int ab = table[a * k + b];
      if (ab != 0) row[ab - 1] -= 1;
      A.push_back(std::move(row));
    }
  auto solver = std::make_shared<const zmod::Diagonalization>(std::move(A), M, cols);
  std::lock_guard<std::mutex> guard(lock);
  cache.emplace(std::move(key), solver);
  return solver;
}

/// Exponents on pairs (a, b) with a, b != e, scaled into Z/M.
inline std::vector<long long> offIdentityVector(const Cocycle& alpha, long long M) {
  const int k = alpha.size();
  const long long scale = M / alpha.modulus();
  std::vector<long long> v;
  for (int a = 1; a < k; ++a)
    for (int b = 1; b < k; ++b) v.push_back(alpha.at(a, b) * scale % M);
  return v;
}

}  // namespace detail

/// Extended-modulus coboundary test. Returns f (local indices, f(e) = 0) with
/// beta - alpha = delta f modulo M = lcm(m, m') * extension, where the
/// default extension is the exponent of H.
inline std::optional<std::vector<long long>> isCohomologous(const Cocycle& alpha, const Cocycle& beta, int extension = 0) {
  if (alpha.subgroup().elements() != beta.subgroup().elements() ||
      alpha.subgroup().group().order() != beta.subgroup().group().order())
    throw PreconditionError("cocycles live on different subgroups");
  if (extension <= 0) extension = alpha.subgroup().group().restrictTo(alpha.subgroup().elements()).exponent();
  const long long M = static_cast<long long>(std::lcm(alpha.modulus(), beta.modulus())) * extension;
  auto solver = detail::coboundarySolver(alpha, M);
  auto a = detail::offIdentityVector(alpha, M);
  auto b = detail::offIdentityVector(beta, M);
  for (std::size_t i = 0; i < a.size(); ++i) b[i] = zmod::reduce(b[i] - a[i], M);
  auto sol = solver->solve(b);
  if (!sol) return std::nullopt;
  std::vector<long long> f(alpha.size(), 0);
  for (int i = 1; i < alpha.size(); ++i) f[i] = (*sol)[i - 1];
  return f;
}

/// Canonical key of the class of alpha modulo coboundaries over Z/M.
inline std::vector<long long> cohomologyKey(const Cocycle& alpha, long long M) {
  if (M % alpha.modulus() != 0) throw PreconditionError("key modulus must be a multiple of the cocycle modulus");
  return detail::coboundarySolver(alpha, M)->key(detail::offIdentityVector(alpha, M));
}

/// Representative of alpha + (Z/m coboundaries) that depends only on the class.
inline Cocycle canonicalCocycle(const Cocycle& alpha) {
  const int k = alpha.size(), m = alpha.modulus();
  auto c = detail::coboundarySolver(alpha, m)->canonical(detail::offIdentityVector(alpha, m));
  std::vector<int> e(static_cast<std::size_t>(k) * k, 0);
  std::size_t pos = 0;
  for (int a = 1; a < k; ++a)
    for (int b = 1; b < k; ++b) e[a * k + b] = static_cast<int>(c[pos++]);
  return Cocycle(alpha.subgroup(), m, std::move(e));
}

/// Representatives of the mu_m-valued cocycle classes on H, merged when they
/// agree up to an extended-modulus coboundary.
inline std::vector<Cocycle> h2Classes(const SubgroupData& H, int m, const Caps& caps = defaultCaps()) {
  const int k = H.order();
  if (static_cast<std::size_t>(k) > caps.h2Order)
    throw BudgetError("|H| = " + std::to_string(k) + " exceeds the h2 cap " + std::to_string(caps.h2Order));
  if (m <= 0) throw PreconditionError("modulus must be positive");
  Cocycle shape = Cocycle::trivial(H, m);
  if (k == 1) return {shape};
  const int w = k - 1;
  auto var = [w](int a, int b) { return (a - 1) * w + (b - 1); };
  std::vector<std::vector<long long>> eqs;
  for (int a = 1; a < k; ++a)
    for (int b = 1; b < k; ++b)
      for (int c = 1; c < k; ++c) {
        std::vector<long long> row(static_cast<std::size_t>(w) * w, 0);
        const int ab = shape.lmul(a, b), bc = shape.lmul(b, c);
        row[var(a, b)] += 1;
        if (ab != 0) row[var(ab, c)] += 1;
        row[var(b, c)] -= 1;
        if (bc != 0) row[var(a, bc)] -= 1;
        bool zero = std::all_of(row.begin(), row.end(), [&](long long x) { return x % m == 0; });
        if (!zero) eqs.push_back(std::move(row));
      }
  const zmod::Diagonalization cocycles(eqs, m, w * w);
  const auto gens = cocycles.kernel();
  auto boundaries = detail::coboundarySolver(shape, m);

  // Breadth-first walk of Z/B from the trivial class.
  std::vector<std::vector<long long>> reps{std::vector<long long>(static_cast<std::size_t>(w) * w, 0)};
  std::set<std::vector<long long>> seen{boundaries->key(reps[0])};
  const std::size_t limit = std::size_t(1) << 20;
  for (std::size_t head = 0; head < reps.size(); ++head)
    for (const auto& g : gens) {
      std::vector<long long> next = reps[head];
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = zmod::reduce(next[i] + g[i], m);
      if (seen.insert(boundaries->key(next)).second) {
        reps.push_back(boundaries->canonical(next));
        if (reps.size() > limit) throw BudgetError("cocycle class enumeration exceeds " + std::to_string(limit));
      }
    }

  auto toCocycle = [&](const std::vector<long long>& v) {
    std::vector<int> e(static_cast<std::size_t>(k) * k, 0);
    for (int a = 1; a < k; ++a)
      for (int b = 1; b < k; ++b) e[a * k + b] = static_cast<int>(v[var(a, b)]);
    return Cocycle(H, m, std::move(e));
  };
  const long long M = static_cast<long long>(m) * H.group().restrictTo(H.elements()).exponent();
  std::set<std::vector<long long>> merged;
  std::vector<Cocycle> out;
  for (const auto& v : reps) {
    Cocycle c = toCocycle(v);
    if (!validateCocycle(c)) throw InternalError("kernel vector fails the cocycle identity");
    if (merged.insert(cohomologyKey(c, M)).second) out.push_back(canonicalCocycle(c));
  }
  return out;
}

/// Whether the ratio kernels of alpha and beta (same H) coincide on all
/// binomials of length <= L.
inline bool binomialKernelsAgree(const Cocycle& alpha, const Cocycle& beta, int L) {
  for (int r = 2; r <= L; ++r) {
    bool ok = reduceBinomials(
        alpha, r, true,
        [&](bool& acc, std::span<const int> w, std::span<const int> p) {
          acc = (localRatio(alpha, w, p) == 0) == (localRatio(beta, w, p) == 0);
          return acc;
        },
        [](bool& a, bool b) { a = a && b; });
    if (!ok) return false;
  }
  return true;
}

/// Does g in N_G(H) preserve B_alpha, tested on words of length <= L.
inline bool normalizesBAlpha(Elem g, const Cocycle& alpha, int L = 4) {
  const SubgroupData& H = alpha.subgroup();
  if (g < 0 || g >= H.group().order() || !H.normalizes(g))
    throw PreconditionError("element " + std::to_string(g) + " does not normalize H");
  Cocycle conj = conjugateCocycle(alpha, g);
  Cocycle aligned(H, conj.modulus(), conj.exps());  // same subgroup, same local order
  // binomial ratios are cohomology invariants
  if (isCohomologous(alpha, aligned)) return true;
  return binomialKernelsAgree(alpha, aligned, L);
}

/// The unit j mod n with s(zeta_n) = zeta_n^j, where s acts on a ratio by
/// conjugating its word entrywise by s^-1 . s.
inline int galoisActionOfS(Elem s, const Cocycle& alpha, int n, int L = 4) {
  const SubgroupData& H = alpha.subgroup();
  if (!H.normalizes(s)) throw PreconditionError("element " + std::to_string(s) + " does not normalize H");
  if (n <= 1) return 1;
  const int m = alpha.modulus();
  if (m % n != 0) throw PreconditionError("n must divide the cocycle modulus");
  const int step = m / n;
  Cocycle conj = conjugateCocycle(alpha, s);
  Cocycle beta(H, conj.modulus(), conj.exps());
  if (isCohomologous(alpha, beta)) return 1;
  using Pairs = std::set<std::pair<int, int>>;
  Pairs pairs;
  for (int r = 2; r <= L; ++r) {
    Pairs found = reduceBinomials(
        alpha, r, Pairs{},
        [&](Pairs& acc, std::span<const int> w, std::span<const int> p) {
          acc.emplace(localRatio(alpha, w, p), localRatio(beta, w, p));
          return true;
        },
        [](Pairs& a, const Pairs& b) { a.insert(b.begin(), b.end()); });
    pairs.insert(found.begin(), found.end());
  }
  std::optional<int> j;
  for (auto [x, y] : pairs) {
    if (x % step != 0 || y % step != 0) throw PreconditionError("ratio outside mu_n; n does not match the cocycle");
    const int a = x / step;
    if (std::gcd(a, n) == 1) {
      j = static_cast<int>(static_cast<long long>(y / step) * inverseMod(a, n) % n);
      break;
    }
  }
  if (!j) {
    // no single primitive witness: the ratios still generate mu_n, so at most one unit fits
    for (int u : unitsMod(n)) {
      bool fits = true;
      for (auto [x, y] : pairs)
        if (static_cast<long long>(x / step) * u % n != y / step) {
          fits = false;
          break;
        }
      if (fits) {
        j = u;
        break;
      }
    }
    if (!j) throw PreconditionError("no unit mod " + std::to_string(n) + " matches the action of element " + std::to_string(s));
  }
  for (auto [x, y] : pairs)
    if (static_cast<long long>(x / step) * *j % n != y / step)
      throw PreconditionError("action of element " + std::to_string(s) + " on ratios is not a Galois automorphism");
  if (std::gcd(*j, n) != 1) throw PreconditionError("induced map on mu_n is not an automorphism");
  return *j;
}

}  // namespace gforge
