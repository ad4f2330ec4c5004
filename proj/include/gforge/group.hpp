#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "gforge/error.hpp"

namespace gforge {

/// Dense element index; 0 is always the identity.
using Elem = int;

/// A finite group stored as a full multiplication table.
class Group {
public:
  Group() = default;

  /// Builds a group from a Cayley table. Row/column 0 must be the identity.
  static Group fromTable(const std::vector<std::vector<int>>& table,
                         std::vector<std::string> names = {},
                         std::size_t cap = defaultCaps().groupOrder) {
    const std::size_t n = table.size();
    if (n == 0) throw PreconditionError("group table is empty");
    if (n > cap) throw BudgetError("group order " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
    Group g;
    g.order_ = static_cast<int>(n);
    g.mul_.assign(n * n, 0);
    for (std::size_t a = 0; a < n; ++a) {
      if (table[a].size() != n) throw PreconditionError("group table is not square");
      std::vector<char> seen(n, 0);
      for (std::size_t b = 0; b < n; ++b) {
        int v = table[a][b];
        if (v < 0 || static_cast<std::size_t>(v) >= n) throw PreconditionError("group table entry out of range");
        if (seen[v]) throw PreconditionError("group table is not a Latin square");
        seen[v] = 1;
        g.mul_[a * n + b] = v;
      }
    }
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<char> seen(n, 0);
      for (std::size_t a = 0; a < n; ++a) {
        int v = g.mul_[a * n + b];
        if (seen[v]) throw PreconditionError("group table is not a Latin square");
        seen[v] = 1;
      }
    }
    for (int a = 0; a < g.order_; ++a) {
      if (g.mul(0, a) != a || g.mul(a, 0) != a) throw PreconditionError("index 0 is not a two-sided identity");
    }
    for (int a = 0; a < g.order_; ++a)
      for (int b = 0; b < g.order_; ++b) {
        const int ab = g.mul(a, b);
        for (int c = 0; c < g.order_; ++c)
          if (g.mul(ab, c) != g.mul(a, g.mul(b, c))) throw PreconditionError("group table is not associative");
      }
    g.finish(std::move(names));
    return g;
  }

  /// Closes a set of permutations of {0..degree-1}. Products compose left to
  /// right: (a*b)(x) = b(a(x)). Elements are numbered in breadth-first
  /// discovery order starting from the identity.
  static Group fromPermutations(const std::vector<std::vector<int>>& generators, int degree,
                                std::vector<std::string> names = {},
                                std::size_t cap = defaultCaps().groupOrder) {
    if (degree <= 0) throw PreconditionError("permutation degree must be positive");
    for (const auto& p : generators) {
      if (static_cast<int>(p.size()) != degree) throw PreconditionError("generator has wrong degree");
      std::vector<char> seen(degree, 0);
      for (int v : p) {
        if (v < 0 || v >= degree || seen[v]) throw PreconditionError("generator is not a permutation");
        seen[v] = 1;
      }
    }
    using Perm = std::vector<int>;
    Perm id(degree);
    for (int i = 0; i < degree; ++i) id[i] = i;
    std::vector<Perm> elems{id};
    std::map<Perm, int> index{{id, 0}};
    auto compose = [degree](const Perm& a, const Perm& b) {
      Perm r(degree);
      for (int x = 0; x < degree; ++x) r[x] = b[a[x]];
      return r;
    };
    for (std::size_t head = 0; head < elems.size(); ++head) {
      for (const auto& gen : generators) {
        Perm next = compose(elems[head], gen);
        if (index.emplace(next, static_cast<int>(elems.size())).second) {
          elems.push_back(std::move(next));
          if (elems.size() > cap)
            throw BudgetError("permutation closure exceeds group order cap " + std::to_string(cap));
        }
      }
    }
    Group g;
    g.order_ = static_cast<int>(elems.size());
    g.mul_.assign(elems.size() * elems.size(), 0);
    for (int a = 0; a < g.order_; ++a)
      for (int b = 0; b < g.order_; ++b) g.mul_[a * g.order_ + b] = index.at(compose(elems[a], elems[b]));
    g.finish(std::move(names));
    return g;
  }

  int order() const noexcept { return order_; }
  Elem mul(Elem a, Elem b) const { return mul_[static_cast<std::size_t>(a) * order_ + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  /// g h g^-1
  Elem conj(Elem g, Elem h) const { return mul(mul(g, h), inv(g)); }
  Elem product(std::span<const Elem> word) const {
    Elem acc = 0;
    for (Elem x : word) acc = mul(acc, x);
    return acc;
  }
  int elementOrder(Elem a) const {
    int k = 1;
    for (Elem x = a; x != 0; x = mul(x, a)) ++k;
    return k;
  }
  /// Least common multiple of the element orders.
  int exponent() const {
    int e = 1;
    for (Elem a = 0; a < order_; ++a) e = std::lcm(e, elementOrder(a));
    return e;
  }
  bool isAbelian() const {
    for (Elem a = 0; a < order_; ++a)
      for (Elem b = 0; b < order_; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  const std::vector<std::string>& names() const { return names_; }
  std::string name(Elem a) const { return names_.empty() ? std::to_string(a) : names_[a]; }
  std::optional<Elem> find(const std::string& label) const {
    for (Elem a = 0; a < static_cast<Elem>(names_.size()); ++a)
      if (names_[a] == label) return a;
    return std::nullopt;
  }

  /// Smallest subgroup containing `gens`, as a sorted index set.
  std::vector<Elem> generated(std::span<const Elem> gens) const {
    std::vector<char> in(order_, 0);
    std::vector<Elem> elems{0};
    in[0] = 1;
    for (std::size_t head = 0; head < elems.size(); ++head)
      for (Elem g : gens) {
        Elem x = mul(elems[head], g);
        if (!in[x]) {
          in[x] = 1;
          elems.push_back(x);
        }
      }
    std::sort(elems.begin(), elems.end());
    return elems;
  }

  bool isSubgroup(std::span<const Elem> set) const {
    std::vector<char> in(order_, 0);
    for (Elem x : set) {
      if (x < 0 || x >= order_) return false;
      in[x] = 1;
    }
    if (!in[0]) return false;
    for (Elem a : set) {
      if (!in[inv(a)]) return false;
      for (Elem b : set)
        if (!in[mul(a, b)]) return false;
    }
    return true;
  }

  /// The subgroup `elems` (sorted, containing 0) as a standalone group whose
  /// index i corresponds to elems[i].
  Group restrictTo(std::span<const Elem> elems) const {
    std::vector<int> local(order_, -1);
    for (std::size_t i = 0; i < elems.size(); ++i) local[elems[i]] = static_cast<int>(i);
    Group g;
    g.order_ = static_cast<int>(elems.size());
    g.mul_.resize(elems.size() * elems.size());
    for (std::size_t a = 0; a < elems.size(); ++a)
      for (std::size_t b = 0; b < elems.size(); ++b) {
        int v = local[mul(elems[a], elems[b])];
        if (v < 0) throw PreconditionError("restrictTo: set is not closed");
        g.mul_[a * elems.size() + b] = v;
      }
    std::vector<std::string> names;
    if (!names_.empty())
      for (Elem e : elems) names.push_back(names_[e]);
    g.finish(std::move(names));
    return g;
  }

  bool operator==(const Group& o) const { return order_ == o.order_ && mul_ == o.mul_; }

private:
  void finish(std::vector<std::string> names) {
    inv_.assign(order_, 0);
    for (int a = 0; a < order_; ++a)
      for (int b = 0; b < order_; ++b)
        if (mul(a, b) == 0) inv_[a] = b;
    if (!names.empty() && static_cast<int>(names.size()) != order_)
      throw PreconditionError("names list does not match group order");
    names_ = std::move(names);
  }

  int order_ = 0;
  std::vector<int> mul_;
  std::vector<int> inv_;
  std::vector<std::string> names_;
};

using GroupPtr = std::shared_ptr<const Group>;

inline GroupPtr makeGroup(Group g) { return std::make_shared<const Group>(std::move(g)); }

/// A subgroup H together with its right cosets Hg, canonical transversal and
/// normalizer. Coset ids are the minimal element index of the coset.
class SubgroupData {
public:
  SubgroupData() = default;

  SubgroupData(GroupPtr parent, std::vector<Elem> elements) : parent_(std::move(parent)), elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    const Group& G = *parent_;
    if (!G.isSubgroup(elements_)) throw PreconditionError("element set is not a subgroup");
    const int n = G.order();
    local_.assign(n, -1);
    for (std::size_t i = 0; i < elements_.size(); ++i) local_[elements_[i]] = static_cast<int>(i);
    cosetOf_.assign(n, -1);
    for (Elem g = 0; g < n; ++g) {
      if (cosetOf_[g] >= 0) continue;
      // g is minimal among unassigned elements, hence minimal in Hg.
      std::vector<Elem> coset;
      for (Elem h : elements_) coset.push_back(G.mul(h, g));
      std::sort(coset.begin(), coset.end());
      for (Elem x : coset) cosetOf_[x] = g;
      transversal_.push_back(g);
      cosets_.emplace(g, std::move(coset));
    }
    for (Elem g = 0; g < n; ++g) {
      bool normalizes = true;
      for (Elem h : elements_)
        if (local_[G.conj(g, h)] < 0) {
          normalizes = false;
          break;
        }
      if (normalizes) normalizer_.push_back(g);
    }
  }

  const Group& group() const { return *parent_; }
  const GroupPtr& groupPtr() const { return parent_; }
  const std::vector<Elem>& elements() const { return elements_; }
  int order() const { return static_cast<int>(elements_.size()); }
  int index() const { return static_cast<int>(transversal_.size()); }
  bool contains(Elem g) const { return local_[g] >= 0; }
  /// Position of g inside the sorted element list, or -1.
  int localIndex(Elem g) const { return local_[g]; }
  Elem cosetOf(Elem g) const { return cosetOf_[g]; }
  const std::vector<Elem>& transversal() const { return transversal_; }
  const std::map<Elem, std::vector<Elem>>& rightCosets() const { return cosets_; }
  const std::vector<Elem>& normalizer() const { return normalizer_; }
  bool normalizes(Elem g) const { return std::binary_search(normalizer_.begin(), normalizer_.end(), g); }
  bool isNormal() const { return static_cast<int>(normalizer_.size()) == parent_->order(); }

  /// g H g^-1 as a new subgroup of the same parent.
  SubgroupData conjugate(Elem g) const {
    std::vector<Elem> conj;
    for (Elem h : elements_) conj.push_back(parent_->conj(g, h));
    return SubgroupData(parent_, std::move(conj));
  }

  bool operator==(const SubgroupData& o) const { return elements_ == o.elements_ && *parent_ == *o.parent_; }

private:
  GroupPtr parent_;
  std::vector<Elem> elements_;
  std::vector<int> local_;
  std::vector<Elem> cosetOf_;
  std::vector<Elem> transversal_;
  std::map<Elem, std::vector<Elem>> cosets_;
  std::vector<Elem> normalizer_;
};

inline SubgroupData cosetData(GroupPtr G, std::vector<Elem> H) { return SubgroupData(std::move(G), std::move(H)); }

/// Multiset of right H-cosets, keyed by coset id.
struct CosetMultiset {
  std::map<Elem, int> counts;

  int total() const {
    int t = 0;
    for (const auto& [c, k] : counts) t += k;
    return t;
  }
  int count(Elem coset) const {
    auto it = counts.find(coset);
    return it == counts.end() ? 0 : it->second;
  }
  bool operator==(const CosetMultiset& o) const { return counts == o.counts; }
  bool operator<(const CosetMultiset& o) const { return counts < o.counts; }

  static CosetMultiset fromTuple(const SubgroupData& H, std::span<const Elem> tuple) {
    CosetMultiset m;
    for (Elem g : tuple) ++m.counts[H.cosetOf(g)];
    return m;
  }
};

/// Left action Hb -> Hgb of the normalizer on coset multisets.
inline CosetMultiset actOnMultiset(const SubgroupData& H, Elem g, const CosetMultiset& lambda) {
  if (!H.normalizes(g)) throw PreconditionError("act_on_multiset: element " + std::to_string(g) + " does not normalize H");
  CosetMultiset out;
  for (const auto& [coset, k] : lambda.counts) out.counts[H.cosetOf(H.group().mul(g, coset))] += k;
  return out;
}

/// Subgroup {g in N_G(H) : g.Lambda = Lambda}.
inline std::vector<Elem> multisetStabilizer(const SubgroupData& H, const CosetMultiset& lambda) {
  std::vector<Elem> stab;
  for (Elem g : H.normalizer())
    if (actOnMultiset(H, g, lambda) == lambda) stab.push_back(g);
  return stab;
}

/// All subgroups U with lower <= U <= upper (upper must be a subgroup).
inline std::vector<std::vector<Elem>> intermediateSubgroups(const Group& G, const std::vector<Elem>& lower,
                                                            const std::vector<Elem>& upper) {
  std::vector<std::vector<Elem>> found{G.generated(lower)};
  std::map<std::vector<Elem>, bool> seen{{found[0], true}};
  for (std::size_t head = 0; head < found.size(); ++head) {
    for (Elem g : upper) {
      if (std::binary_search(found[head].begin(), found[head].end(), g)) continue;
      std::vector<Elem> gens = found[head];
      gens.push_back(g);
      auto sub = G.generated(gens);
      if (seen.emplace(sub, true).second) found.push_back(std::move(sub));
    }
  }
  return found;
}

}  // namespace gforge
