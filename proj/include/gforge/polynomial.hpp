#pragma once

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gforge/cyclo.hpp"
#include "gforge/error.hpp"
#include "gforge/galgebra.hpp"
#include "gforge/parallel.hpp"

namespace gforge {

struct PolyVar {
  int id = 0;
  Elem degree = 0;
  bool operator==(const PolyVar&) const = default;
};

struct Monomial {
  CycScalar coeff = CycScalar::one();
  std::vector<int> seq;  // variable ids
};

/// Noncommutative polynomial in G-graded variables.
class GradedPolynomial {
public:
  GradedPolynomial() = default;

  void addVar(int id, Elem degree) {
    auto it = std::find_if(vars_.begin(), vars_.end(), [id](const PolyVar& v) { return v.id == id; });
    if (it != vars_.end()) {
      if (it->degree != degree) throw PreconditionError("variable " + std::to_string(id) + " declared with two degrees");
      return;
    }
    vars_.push_back({id, degree});
    std::sort(vars_.begin(), vars_.end(), [](const PolyVar& a, const PolyVar& b) { return a.id < b.id; });
  }

  void addMonomial(CycScalar coeff, std::vector<int> seq) {
    for (int v : seq) degreeOf(v);
    if (coeff.isZero()) return;
    monomials_.push_back({std::move(coeff), std::move(seq)});
  }

  const std::vector<PolyVar>& vars() const { return vars_; }
  const std::vector<Monomial>& monomials() const { return monomials_; }
  bool isZero() const { return monomials_.empty(); }

  Elem degreeOf(int id) const {
    for (const auto& v : vars_)
      if (v.id == id) return v.degree;
    throw PreconditionError("undeclared variable " + std::to_string(id));
  }
  int maxVarId() const { return vars_.empty() ? -1 : vars_.back().id; }

  /// Merges equal words and drops zero coefficients; words end up sorted.
  GradedPolynomial combined() const {
    std::map<std::vector<int>, CycScalar> acc;
    for (const auto& m : monomials_) {
      auto [it, fresh] = acc.emplace(m.seq, m.coeff);
      if (!fresh) it->second += m.coeff;
    }
    GradedPolynomial out;
    out.vars_ = vars_;
    for (auto& [seq, c] : acc)
      if (!c.isZero()) out.monomials_.push_back({c, seq});
    return out;
  }

  std::map<int, int> variableCounts(const Monomial& m) const {
    std::map<int, int> c;
    for (int v : m.seq) ++c[v];
    return c;
  }

  /// Every monomial has the same variable multiset.
  bool isMultihomogeneous() const {
    for (const auto& m : monomials_)
      if (variableCounts(m) != variableCounts(monomials_.front())) return false;
    return true;
  }

  /// Multihomogeneous with every variable of degree at most one.
  bool isMultilinear() const {
    if (!isMultihomogeneous()) return false;
    for (const auto& m : monomials_)
      for (auto [v, k] : variableCounts(m))
        if (k > 1) return false;
    return true;
  }

  bool isGHomogeneous(const Group& G) const {
    std::optional<Elem> d;
    for (const auto& m : monomials_) {
      Elem x = 0;
      for (int v : m.seq) x = G.mul(x, degreeOf(v));
      if (d && *d != x) return false;
      d = x;
    }
    return true;
  }

  /// Multihomogeneous components, keyed by variable multiset.
  std::vector<GradedPolynomial> components() const {
    std::map<std::map<int, int>, GradedPolynomial> parts;
    for (const auto& m : monomials_) {
      auto& p = parts[variableCounts(m)];
      p.vars_ = vars_;
      p.monomials_.push_back(m);
    }
    std::vector<GradedPolynomial> out;
    for (auto& [k, p] : parts) out.push_back(std::move(p));
    return out;
  }

  GradedPolynomial operator*(const GradedPolynomial& o) const {
    GradedPolynomial out;
    out.vars_ = vars_;
    for (const auto& v : o.vars_) out.addVar(v.id, v.degree);
    for (const auto& a : monomials_)
      for (const auto& b : o.monomials_) {
        std::vector<int> seq = a.seq;
        seq.insert(seq.end(), b.seq.begin(), b.seq.end());
        out.addMonomial(a.coeff * b.coeff, std::move(seq));
      }
    return out;
  }

  GradedPolynomial operator+(const GradedPolynomial& o) const {
    GradedPolynomial out = *this;
    for (const auto& v : o.vars_) out.addVar(v.id, v.degree);
    for (const auto& m : o.monomials_) out.monomials_.push_back(m);
    return out.combined();
  }

  GradedPolynomial scaled(const CycScalar& c) const {
    GradedPolynomial out;
    out.vars_ = vars_;
    for (const auto& m : monomials_) out.addMonomial(c * m.coeff, m.seq);
    return out;
  }

  bool operator==(const GradedPolynomial& o) const {
    auto a = combined(), b = o.combined();
    if (a.monomials_.size() != b.monomials_.size()) return false;
    for (std::size_t i = 0; i < a.monomials_.size(); ++i)
      if (a.monomials_[i].seq != b.monomials_[i].seq || a.monomials_[i].coeff != b.monomials_[i].coeff) return false;
    return true;
  }

  std::string str() const {
    if (monomials_.empty()) return "0";
    std::string s;
    for (const auto& m : monomials_) {
      if (!s.empty()) s += " + ";
      s += "(" + m.coeff.str() + ")";
      for (int v : m.seq) s += "*x" + std::to_string(v);
    }
    return s;
  }

private:
  std::vector<PolyVar> vars_;
  std::vector<Monomial> monomials_;
};

using Assignment = std::map<int, std::size_t>;

inline AlgElement evaluate(const GradedPolynomial& p, const GradedAlgebra& A, const Assignment& a) {
  for (const auto& [id, idx] : a) {
    if (idx >= A.dim()) throw PreconditionError("assigned basis index out of range");
    if (A.degree(idx) != p.degreeOf(id))
      throw PreconditionError("variable " + std::to_string(id) + " assigned an element of the wrong degree");
  }
  AlgElement total(A);
  for (const auto& m : p.monomials()) {
    if (m.seq.empty()) {
      total += m.coeff * AlgElement::identity(A);
      continue;
    }
    std::optional<AlgElement> prod;
    for (int v : m.seq) {
      auto it = a.find(v);
      if (it == a.end()) throw PreconditionError("variable " + std::to_string(v) + " is unassigned");
      auto x = AlgElement::basis(A, it->second);
      prod = prod ? multiply(*prod, x) : x;
      if (prod->isZero()) break;
    }
    total += m.coeff * *prod;
  }
  return total;
}

/// Full linearization step on the highest-degree variable (ties: smallest id),
/// repeated until multilinear. Keeps the part that is multilinear in the new
/// variables t_1..t_k, which is the substituted expansion minus all terms
/// that miss some t_r.
inline GradedPolynomial linearize(const GradedPolynomial& p) {
  if (!p.isMultihomogeneous()) throw PreconditionError("linearize needs a multihomogeneous polynomial");
  GradedPolynomial cur = p.combined();
  while (!cur.isMultilinear() && !cur.isZero()) {
    auto counts = cur.variableCounts(cur.monomials().front());
    int x = -1, k = 0;
    for (auto [v, c] : counts)
      if (c > k) {
        k = c;
        x = v;
      }
    GradedPolynomial next;
    for (const auto& v : cur.vars())
      if (v.id != x) next.addVar(v.id, v.degree);
    const int base = cur.maxVarId() + 1;
    for (int r = 0; r < k; ++r) next.addVar(base + r, cur.degreeOf(x));
    std::vector<int> perm(k);
    for (const auto& m : cur.monomials()) {
      std::vector<std::size_t> pos;
      for (std::size_t i = 0; i < m.seq.size(); ++i)
        if (m.seq[i] == x) pos.push_back(i);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        auto seq = m.seq;
        for (int r = 0; r < k; ++r) seq[pos[r]] = base + perm[r];
        next.addMonomial(m.coeff, std::move(seq));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    cur = next.combined();
  }
  return cur;
}

/// Substitutes variables by others (e.g. t_1 = ... = t_k = x).
inline GradedPolynomial renameVariables(const GradedPolynomial& p, const std::map<int, int>& to) {
  GradedPolynomial out;
  for (const auto& v : p.vars()) {
    auto it = to.find(v.id);
    out.addVar(it == to.end() ? v.id : it->second, v.degree);
  }
  for (const auto& m : p.monomials()) {
    auto seq = m.seq;
    for (auto& v : seq)
      if (auto it = to.find(v); it != to.end()) v = it->second;
    out.addMonomial(m.coeff, std::move(seq));
  }
  return out.combined();
}

struct IdentityOptions {
  unsigned long long budget = 10'000'000ULL;
  int workers = 0;
  /// Restrict one variable to basis values with this row (path evaluation).
  std::optional<std::pair<int, int>> restrictRow;
};

struct IdentityReport {
  bool isIdentity = true;
  std::optional<Assignment> falsifying;
  unsigned long long searchSize = 0;
  bool linearized = false;
};

namespace detail {

/// Exhaustive basis-evaluation search for one multilinear polynomial.
class IdentitySearch {
public:
  IdentitySearch(const GradedPolynomial& p, const GradedAlgebra& A, const IdentityOptions& opt) : p_(p), A_(A) {
    for (const auto& m : p.monomials())
      for (int v : m.seq)
        if (std::find(slots_.begin(), slots_.end(), v) == slots_.end()) slots_.push_back(v);
    std::sort(slots_.begin(), slots_.end());
    for (int v : slots_) {
      std::vector<std::size_t> dom = A.homogeneous(p.degreeOf(v));
      if (opt.restrictRow && opt.restrictRow->first == v) {
        std::vector<std::size_t> keep;
        for (auto idx : dom)
          if (A.basis(idx).i == opt.restrictRow->second) keep.push_back(idx);
        dom = std::move(keep);
      }
      domains_.push_back(std::move(dom));
    }
    unsigned __int128 size = 1;
    for (const auto& d : domains_) {
      size *= d.size();
      if (size > opt.budget) {
        std::string exact = exactSize();
        throw BudgetError("identity search space " + exact + " exceeds budget " + std::to_string(opt.budget));
      }
    }
    size_ = static_cast<unsigned long long>(size);

    // integer coefficients over the exponent basis of zeta_L
    L_ = A.scalarModulus();
    for (const auto& m : p.monomials()) L_ = std::lcm(L_, m.coeff.modulus());
    mpz_class den = 1;
    for (const auto& m : p.monomials())
      for (const auto& q : m.coeff.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    for (const auto& m : p.monomials()) {
      Term t;
      for (int v : m.seq) t.slots.push_back(static_cast<int>(std::find(slots_.begin(), slots_.end(), v) - slots_.begin()));
      const CycScalar c = m.coeff.promote(L_);
      for (std::size_t k = 0; k < c.coeffs().size(); ++k) {
        if (c.coeffs()[k] == 0) continue;
        mpz_class num = c.coeffs()[k].get_num() * (den / c.coeffs()[k].get_den());
        if (!num.fits_slong_p()) throw BudgetError("polynomial coefficients are too large for the identity oracle");
        t.coeff.emplace_back(static_cast<int>(k), num.get_si());
      }
      terms_.push_back(std::move(t));
    }
    phi_ = cyclotomicPolynomial(L_);
  }

  unsigned long long size() const { return size_; }

  IdentityReport run(int workers) {
    IdentityReport rep;
    rep.searchSize = size_;
    if (terms_.empty()) return rep;
    for (const auto& d : domains_)
      if (d.empty()) return rep;
    const std::size_t first = domains_[0].size();
    std::atomic<std::size_t> best{first};
    std::mutex lock;
    std::vector<std::size_t> bestChoice;
    parallelFor(first, [&](std::size_t i0) {
      if (i0 > best.load()) return true;
      std::vector<std::size_t> choice(domains_.size(), 0);
      choice[0] = i0;
      std::vector<std::size_t> values(domains_.size());
      std::size_t counter = 0;
      while (true) {
        for (std::size_t s = 0; s < domains_.size(); ++s) values[s] = domains_[s][choice[s]];
        if (!vanishes(values)) {
          std::lock_guard<std::mutex> guard(lock);
          if (i0 < best.load()) {
            best = i0;
            bestChoice = choice;
          }
          return true;
        }
        if ((++counter & 1023) == 0 && best.load() < i0) return true;
        std::size_t pos = domains_.size() - 1;
        while (pos >= 1 && ++choice[pos] == domains_[pos].size()) choice[pos--] = 0;
        if (pos < 1) break;
      }
      return true;
    }, workers);
    if (best.load() < first) {
      rep.isIdentity = false;
      Assignment a;
      for (std::size_t s = 0; s < slots_.size(); ++s) a[slots_[s]] = domains_[s][bestChoice[s]];
      rep.falsifying = std::move(a);
    }
    return rep;
  }

private:
  struct Term {
    std::vector<int> slots;
    std::vector<std::pair<int, long>> coeff;  // (power of zeta_L, integer)
  };

  std::string exactSize() const {
    mpz_class s = 1;
    for (const auto& d : domains_) s *= static_cast<unsigned long>(d.size());
    return s.get_str();
  }

  bool vanishes(const std::vector<std::size_t>& values) const {
    const Cocycle& alpha = A_.alpha();
    const int step = L_ / alpha.modulus();
    std::map<std::size_t, std::vector<__int128>> acc;
    for (const auto& t : terms_) {
      auto b = A_.basis(values[t.slots[0]]);
      int h = b.h, e = 0, col = b.j;
      bool zero = false;
      for (std::size_t k = 1; k < t.slots.size(); ++k) {
        auto c = A_.basis(values[t.slots[k]]);
        if (c.i != col) {
          zero = true;
          break;
        }
        e += alpha.at(h, c.h);
        h = alpha.lmul(h, c.h);
        col = c.j;
      }
      if (zero) continue;
      auto& vec = acc[A_.index(h, b.i, col)];
      if (vec.empty()) vec.assign(L_, 0);
      const int rot = static_cast<int>((static_cast<long long>(e) * step) % L_);
      for (auto [k, c] : t.coeff) vec[(k + rot) % L_] += c;
    }
    for (auto& [idx, vec] : acc)
      if (!reducesToZero(vec)) return false;
    return true;
  }

  bool reducesToZero(std::vector<__int128>& v) const {
    const int deg = static_cast<int>(phi_.size()) - 1;
    for (int k = L_ - 1; k >= deg; --k) {
      if (v[k] == 0) continue;
      const __int128 c = v[k];
      for (int i = 0; i <= deg; ++i)
        if (phi_[i] != 0) v[k - deg + i] -= c * phi_[i];
    }
    for (int k = 0; k < deg; ++k)
      if (v[k] != 0) return false;
    return true;
  }

  const GradedPolynomial& p_;
  const GradedAlgebra& A_;
  std::vector<int> slots_;
  std::vector<std::vector<std::size_t>> domains_;
  std::vector<Term> terms_;
  unsigned long long size_ = 0;
  int L_ = 1;
  std::vector<long long> phi_;
};

}  // namespace detail

/// Decides whether p vanishes on every degree-respecting basis evaluation.
/// Non-multilinear input is split into multihomogeneous components and each
/// is fully linearized first (characteristic zero).
inline IdentityReport isIdentity(const GradedPolynomial& p, const GradedAlgebra& A, const IdentityOptions& opt = {}) {
  IdentityReport total;
  GradedPolynomial q = p.combined();
  if (q.isZero()) return total;
  if (q.isMultilinear()) {
    detail::IdentitySearch search(q, A, opt);
    return search.run(opt.workers);
  }
  total.linearized = true;
  for (const auto& part : q.components()) {
    if (opt.restrictRow) throw PreconditionError("row-restricted evaluation needs a multilinear polynomial");
    GradedPolynomial lin = linearize(part);
    detail::IdentitySearch search(lin, A, opt);
    auto rep = search.run(opt.workers);
    total.searchSize += rep.searchSize;
    if (!rep.isIdentity) {
      total.isIdentity = false;
      total.falsifying = rep.falsifying;
      return total;
    }
  }
  return total;
}

/// Cosets H(t_1...t_i) of each variable's prefix, plus the total degree.
struct GoodKey {
  Elem total = 0;
  std::map<int, Elem> prefixCoset;
  bool operator<(const GoodKey& o) const { return std::tie(total, prefixCoset) < std::tie(o.total, o.prefixCoset); }
  bool operator==(const GoodKey& o) const { return total == o.total && prefixCoset == o.prefixCoset; }
};

inline GoodKey goodKey(const GradedPolynomial& p, const SubgroupData& H, const std::vector<int>& seq) {
  const Group& G = H.group();
  GoodKey k;
  Elem pre = 0;
  for (int v : seq) {
    pre = G.mul(pre, p.degreeOf(v));
    k.prefixCoset[v] = H.cosetOf(pre);
  }
  k.total = pre;
  return k;
}

/// Whether Zsigma is a good permutation of Z, directly from the definition.
inline bool isGoodPermutation(const GradedPolynomial& p, const SubgroupData& H, const std::vector<int>& Z,
                              const std::vector<int>& Zsigma) {
  auto sorted = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto base = sorted(Z);
  if (Z.size() != Zsigma.size() || base != sorted(Zsigma) || std::adjacent_find(base.begin(), base.end()) != base.end())
    throw PreconditionError("good permutations compare multilinear monomials over one variable set");
  const Group& G = H.group();
  auto prefix = [&](const std::vector<int>& w, std::size_t len) {
    Elem x = 0;
    for (std::size_t q = 0; q < len; ++q) x = G.mul(x, p.degreeOf(w[q]));
    return x;
  };
  if (prefix(Z, Z.size()) != prefix(Zsigma, Zsigma.size())) return false;
  for (std::size_t i = 0; i < Z.size(); ++i) {
    const std::size_t q = std::find(Zsigma.begin(), Zsigma.end(), Z[i]) - Zsigma.begin();
    if (H.cosetOf(prefix(Z, i + 1)) != H.cosetOf(prefix(Zsigma, q + 1))) return false;
  }
  return true;
}

/// Partition of a multilinear polynomial into pure components.
inline std::vector<GradedPolynomial> pureSplit(const GradedPolynomial& p, const SubgroupData& H) {
  GradedPolynomial q = p.combined();
  if (!q.isMultilinear()) throw PreconditionError("pure_split needs a multilinear polynomial over one variable set");
  std::map<GoodKey, GradedPolynomial> parts;
  std::vector<GoodKey> order;
  for (const auto& m : q.monomials()) {
    GoodKey k = goodKey(q, H, m.seq);
    auto [it, fresh] = parts.try_emplace(k);
    if (fresh) {
      order.push_back(k);
      for (const auto& v : q.vars()) it->second.addVar(v.id, v.degree);
    }
    it->second.addMonomial(m.coeff, m.seq);
  }
  std::vector<GradedPolynomial> out;
  for (const auto& k : order) out.push_back(parts[k]);
  return out;
}

inline bool isPure(const GradedPolynomial& p, const SubgroupData& H) { return p.isZero() || pureSplit(p, H).size() == 1; }

struct PathReport {
  int firstVariable = -1;
  std::vector<bool> vanishesOnPath;
  bool isIdentity = true;
  std::vector<std::string> violations;
};

/// Evaluates a pure multilinear polynomial along each path (the first variable
/// of the first monomial starting in row i) and compares with the full oracle.
inline PathReport pathCheck(const GradedPolynomial& p, const GradedAlgebra& A, const IdentityOptions& opt = {}) {
  const auto& P = A.presentation();
  if (static_cast<int>(P.lambda().counts.size()) != P.size())
    throw PreconditionError("path check needs every coset at most once in the tuple");
  GradedPolynomial q = p.combined();
  if (!q.isZero() && !q.isMultilinear()) throw PreconditionError("path check needs a multilinear polynomial");
  if (!isPure(q, P.H)) throw PreconditionError("path check needs a pure polynomial");
  PathReport rep;
  if (q.isZero()) {
    rep.vanishesOnPath.assign(P.size(), true);
    return rep;
  }
  rep.firstVariable = q.monomials().front().seq.front();
  for (int i = 0; i < P.size(); ++i) {
    IdentityOptions o = opt;
    o.restrictRow = std::make_pair(rep.firstVariable, i);
    rep.vanishesOnPath.push_back(isIdentity(q, A, o).isIdentity);
  }
  rep.isIdentity = isIdentity(q, A, opt).isIdentity;
  const bool one = rep.vanishesOnPath[0];
  const bool all = std::all_of(rep.vanishesOnPath.begin(), rep.vanishesOnPath.end(), [](bool b) { return b; });
  if (one != all) rep.violations.push_back("vanishes on path 1 but not on every path");
  if (all != rep.isIdentity) rep.violations.push_back("vanishing on all paths disagrees with the identity oracle");
  return rep;
}

}  // namespace gforge
