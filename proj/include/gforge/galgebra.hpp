#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gforge/cyclo.hpp"
#include "gforge/error.hpp"
#include "gforge/presentation.hpp"

namespace gforge {

/// u_h (x) e_ij with h a local index into H.elements().
struct BasisElem {
  int h = 0, i = 0, j = 0;
  bool operator==(const BasisElem&) const = default;
};

enum class Relation { SameBlock, RelatedDistinct, Unrelated };

inline const char* relationName(Relation r) {
  switch (r) {
    case Relation::SameBlock: return "sameBlock";
    case Relation::RelatedDistinct: return "relatedDistinct";
    case Relation::Unrelated: return "unrelated";
  }
  return "?";
}

/// F^alpha H (x) M_n with the elementary-twisted grading of a presentation.
class GradedAlgebra {
public:
  explicit GradedAlgebra(Presentation P, const Caps& caps = defaultCaps()) : P_(std::move(P)) {
    auto report = validatePresentation(P_);
    if (!report.wellformed) throw PreconditionError("presentation is not well formed: " + report.problems.front());
    k_ = P_.H.order();
    n_ = P_.size();
    const std::size_t d = static_cast<std::size_t>(k_) * n_ * n_;
    if (d > caps.algebraDim)
      throw BudgetError("algebra dimension " + std::to_string(d) + " exceeds cap " + std::to_string(caps.algebraDim));
    const Group& G = P_.group();
    degree_.resize(d);
    byDegree_.assign(G.order(), {});
    for (std::size_t idx = 0; idx < d; ++idx) {
      auto b = basis(idx);
      degree_[idx] = G.mul(G.mul(G.inv(P_.tuple[b.i]), P_.H.elements()[b.h]), P_.tuple[b.j]);
      byDegree_[degree_[idx]].push_back(idx);
    }
    blockOf_.assign(n_, -1);
    for (int i = 0; i < n_; ++i) {
      if (blockOf_[i] >= 0) continue;
      blockOf_[i] = static_cast<int>(blocks_.size());
      blocks_.push_back({i});
      for (int j = i + 1; j < n_; ++j)
        if (blockOf_[j] < 0 && P_.H.cosetOf(P_.tuple[j]) == P_.H.cosetOf(P_.tuple[i])) {
          blockOf_[j] = blockOf_[i];
          blocks_.back().push_back(j);
        }
    }
  }

  const Presentation& presentation() const { return P_; }
  const Cocycle& alpha() const { return P_.alpha; }
  const Group& group() const { return P_.group(); }
  int n() const { return n_; }
  int hOrder() const { return k_; }
  std::size_t dim() const { return degree_.size(); }
  int scalarModulus() const { return P_.alpha.modulus(); }

  std::size_t index(int h, int i, int j) const { return (static_cast<std::size_t>(h) * n_ + i) * n_ + j; }
  std::size_t index(const BasisElem& b) const { return index(b.h, b.i, b.j); }
  BasisElem basis(std::size_t idx) const {
    BasisElem b;
    b.j = static_cast<int>(idx % n_);
    b.i = static_cast<int>((idx / n_) % n_);
    b.h = static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_));
    return b;
  }
  Elem degree(std::size_t idx) const { return degree_[idx]; }
  /// Basis indices of degree g, increasing.
  const std::vector<std::size_t>& homogeneous(Elem g) const { return byDegree_[g]; }
  int dimOf(Elem g) const { return static_cast<int>(byDegree_[g].size()); }
  std::map<Elem, int> dims() const {
    std::map<Elem, int> out;
    for (Elem g = 0; g < group().order(); ++g)
      if (!byDegree_[g].empty()) out[g] = dimOf(g);
    return out;
  }

  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int blockOf(int i) const { return blockOf_[i]; }

  /// (u_h e_ij)(u_h' e_kl) = [j = k] zeta_m^alpha(h,h') u_hh' e_il: (index, exponent).
  std::optional<std::pair<std::size_t, int>> basisProduct(std::size_t a, std::size_t b) const {
    const auto x = basis(a), y = basis(b);
    if (x.j != y.i) return std::nullopt;
    return std::make_pair(index(P_.alpha.lmul(x.h, y.h), x.i, y.j), P_.alpha.at(x.h, y.h));
  }

  /// g_i^-1 H g_j meets H.
  Relation relate(int i, int j) const {
    if (blockOf_[i] == blockOf_[j]) return Relation::SameBlock;
    const Group& G = group();
    for (Elem h : P_.H.elements())
      if (P_.H.contains(G.mul(G.mul(G.inv(P_.tuple[i]), h), P_.tuple[j]))) return Relation::RelatedDistinct;
    return Relation::Unrelated;
  }

  /// Every c with z c w != 0 for e-basis elements z, w: u_x e_{col z, row w}.
  std::vector<std::size_t> bridgeCandidates(std::size_t z, std::size_t w) const {
    requireE(z);
    requireE(w);
    std::vector<std::size_t> out;
    for (int x = 0; x < k_; ++x) out.push_back(index(x, basis(z).j, basis(w).i));
    return out;
  }

  /// Preferred bridge: degree e in a block, degree in H \ {e}
  /// between related blocks (least such x), x = e between unrelated blocks.
  std::optional<std::size_t> bridge(std::size_t z, std::size_t w) const {
    requireE(z);
    requireE(w);
    const int b = basis(z).j, c = basis(w).i;
    const Group& G = group();
    switch (relate(b, c)) {
      case Relation::SameBlock: {
        const int x = P_.H.localIndex(G.mul(P_.tuple[b], G.inv(P_.tuple[c])));
        if (x < 0) return std::nullopt;
        return index(x, b, c);
      }
      case Relation::RelatedDistinct:
        for (int x = 0; x < k_; ++x) {
          const Elem d = degree(index(x, b, c));
          if (d != 0 && P_.H.contains(d)) return index(x, b, c);
        }
        return std::nullopt;
      case Relation::Unrelated: return index(0, b, c);
    }
    return std::nullopt;
  }

  std::string basisName(std::size_t idx) const {
    auto b = basis(idx);
    return "u_" + group().name(P_.H.elements()[b.h]) + "(x)e" + std::to_string(b.i + 1) + "," + std::to_string(b.j + 1);
  }

private:
  void requireE(std::size_t idx) const {
    if (idx >= dim()) throw PreconditionError("basis index out of range");
    if (degree(idx) != 0) throw PreconditionError(basisName(idx) + " is not of degree e");
  }

  Presentation P_;
  int k_ = 0, n_ = 0;
  std::vector<Elem> degree_;
  std::vector<std::vector<std::size_t>> byDegree_;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> blockOf_;
};

/// Sparse element of a GradedAlgebra; zero coefficients are never stored.
class AlgElement {
public:
  explicit AlgElement(const GradedAlgebra& A) : A_(&A) {}

  static AlgElement basis(const GradedAlgebra& A, std::size_t idx, CycScalar c = CycScalar::one()) {
    AlgElement x(A);
    x.add(idx, c);
    return x;
  }
  static AlgElement identity(const GradedAlgebra& A) {
    AlgElement x(A);
    for (int i = 0; i < A.n(); ++i) x.add(A.index(0, i, i), CycScalar::one());
    return x;
  }

  const GradedAlgebra& algebra() const { return *A_; }
  const std::map<std::size_t, CycScalar>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }

  void add(std::size_t idx, const CycScalar& c) {
    if (idx >= A_->dim()) throw PreconditionError("basis index out of range");
    if (c.isZero()) return;
    auto [it, fresh] = terms_.emplace(idx, c);
    if (!fresh) {
      it->second += c;
      if (it->second.isZero()) terms_.erase(it);
    }
  }

  AlgElement& operator+=(const AlgElement& o) {
    sameAlgebra(o);
    for (const auto& [idx, c] : o.terms_) add(idx, c);
    return *this;
  }
  AlgElement& operator-=(const AlgElement& o) {
    sameAlgebra(o);
    for (const auto& [idx, c] : o.terms_) add(idx, -c);
    return *this;
  }
  friend AlgElement operator+(AlgElement a, const AlgElement& b) { return a += b; }
  friend AlgElement operator-(AlgElement a, const AlgElement& b) { return a -= b; }
  friend AlgElement operator*(const CycScalar& s, const AlgElement& x) {
    AlgElement out(*x.A_);
    if (s.isZero()) return out;
    for (const auto& [idx, c] : x.terms_) out.add(idx, s * c);
    return out;
  }

  bool operator==(const AlgElement& o) const {
    if (A_ != o.A_ || terms_.size() != o.terms_.size()) return false;
    for (auto a = terms_.begin(), b = o.terms_.begin(); a != terms_.end(); ++a, ++b)
      if (a->first != b->first || !(a->second == b->second)) return false;
    return true;
  }

  /// Single degree if homogeneous and nonzero.
  std::optional<Elem> degree() const {
    std::optional<Elem> d;
    for (const auto& [idx, c] : terms_) {
      if (d && *d != A_->degree(idx)) return std::nullopt;
      d = A_->degree(idx);
    }
    return d;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [idx, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")*" + A_->basisName(idx);
    }
    return s;
  }

  void sameAlgebra(const AlgElement& o) const {
    if (A_ != o.A_) throw PreconditionError("elements belong to different algebras");
  }

private:
  const GradedAlgebra* A_;
  std::map<std::size_t, CycScalar> terms_;
};

inline AlgElement multiply(const AlgElement& x, const AlgElement& y) {
  x.sameAlgebra(y);
  const GradedAlgebra& A = x.algebra();
  const int m = A.scalarModulus();
  AlgElement out(A);
  for (const auto& [a, ca] : x.terms())
    for (const auto& [b, cb] : y.terms()) {
      auto p = A.basisProduct(a, b);
      if (!p) continue;
      out.add(p->first, ca * cb * CycScalar::root(m, p->second));
    }
  return out;
}

inline AlgElement operator*(const AlgElement& x, const AlgElement& y) { return multiply(x, y); }

}  // namespace gforge
