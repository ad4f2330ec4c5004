#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gforge/polynomial.hpp"

using namespace gforge;

namespace {

GradedPolynomial poly(const std::vector<std::pair<int, Elem>>& vars,
                      const std::vector<std::pair<CycScalar, std::vector<int>>>& monos) {
  GradedPolynomial p;
  for (auto [id, d] : vars) p.addVar(id, d);
  for (const auto& [c, seq] : monos) p.addMonomial(c, seq);
  return p;
}

CycScalar I(long long v) { return CycScalar::integer(v); }

// Pauli: a = (1,0) stored as 1, b = (0,1) stored as 2
GradedPolynomial pauliPair(int sign) {
  return poly({{0, 1}, {1, 2}}, {{I(1), {0, 1}}, {I(sign), {1, 0}}});
}

}  // namespace

TEST(Evaluate, SingleVariable) {
  GradedAlgebra A(fx::eeg());
  auto p = poly({{0, 0}}, {{I(1), {0}}});
  auto v = evaluate(p, A, {{0, A.index(0, 0, 0)}});
  EXPECT_EQ(v, AlgElement::basis(A, A.index(0, 0, 0)));
}

TEST(Evaluate, PauliAnticommutator) {
  GradedAlgebra A(fx::pauli());
  auto v = evaluate(pauliPair(1), A, {{0, A.index(1, 0, 0)}, {1, A.index(2, 0, 0)}});
  EXPECT_TRUE(v.isZero());
}

TEST(Evaluate, EegDegreeGPairLandsInDegreeE) {
  GradedAlgebra A(fx::eeg());
  auto p = poly({{0, 1}, {1, 1}}, {{I(1), {0, 1}}});
  auto v = evaluate(p, A, {{0, A.index(0, 0, 2)}, {1, A.index(0, 2, 0)}});
  ASSERT_FALSE(v.isZero());
  EXPECT_EQ(v.degree(), std::optional<Elem>(0));
}

TEST(Evaluate, Errors) {
  GradedAlgebra A(fx::eeg());
  auto p = poly({{0, 1}, {1, 1}}, {{I(1), {0, 1}}});
  EXPECT_THROW(evaluate(p, A, {{0, A.index(0, 0, 0)}, {1, A.index(0, 2, 0)}}), PreconditionError);
  EXPECT_THROW(evaluate(p, A, {{0, A.index(0, 0, 2)}}), PreconditionError);
}

TEST(Flags, Classification) {
  auto G = catalog::cyclic(2);
  auto lin = poly({{0, 1}, {1, 1}}, {{I(1), {0, 1}}, {I(-1), {1, 0}}});
  EXPECT_TRUE(lin.isMultilinear());
  EXPECT_TRUE(lin.isGHomogeneous(*G));
  auto sq = poly({{0, 1}}, {{I(1), {0, 0}}});
  EXPECT_TRUE(sq.isMultihomogeneous());
  EXPECT_FALSE(sq.isMultilinear());
  auto mixed = poly({{0, 1}, {1, 0}}, {{I(1), {0}}, {I(1), {1}}});
  EXPECT_FALSE(mixed.isMultihomogeneous());
  EXPECT_FALSE(mixed.isGHomogeneous(*G));
}

TEST(Identity, PauliSignedPair) {
  GradedAlgebra A(fx::pauli());
  EXPECT_TRUE(isIdentity(pauliPair(1), A).isIdentity);
  auto rep = isIdentity(pauliPair(-1), A);
  EXPECT_FALSE(rep.isIdentity);
  ASSERT_TRUE(rep.falsifying.has_value());
  EXPECT_FALSE(evaluate(pauliPair(-1), A, *rep.falsifying).isZero());
}

TEST(Identity, ZeroPolynomial) {
  GradedAlgebra A(fx::eeg());
  EXPECT_TRUE(isIdentity(GradedPolynomial{}, A).isIdentity);
  auto cancel = poly({{0, 1}}, {{I(2), {0}}, {I(-2), {0}}});
  EXPECT_TRUE(isIdentity(cancel, A).isIdentity);
}

TEST(Identity, AgreesWithExhaustiveEvaluation) {
  // independent oracle: AlgElement evaluation over every assignment
  GradedAlgebra A(fx::eeg());
  for (int trial = 0; trial < 40; ++trial) {
    GradedPolynomial p;
    const int r = fx::uniform(2, 3);
    std::vector<int> seq;
    for (int v = 0; v < r; ++v) {
      p.addVar(v, fx::uniform(0, 1));
      seq.push_back(v);
    }
    do {
      if (fx::uniform(0, 2) == 0) p.addMonomial(I(fx::uniform(-2, 2)), seq);
    } while (std::next_permutation(seq.begin(), seq.end()));
    bool vanishes = true;
    std::vector<std::size_t> c(r, 0);
    while (vanishes) {
      Assignment a;
      for (int v = 0; v < r; ++v) a[v] = A.homogeneous(p.degreeOf(v))[c[v]];
      vanishes = evaluate(p, A, a).isZero();
      int pos = r;
      while (pos > 0 && ++c[pos - 1] == A.homogeneous(p.degreeOf(pos - 1)).size()) c[--pos] = 0;
      if (pos == 0) break;
    }
    EXPECT_EQ(isIdentity(p, A).isIdentity, vanishes) << p.str();
  }
}

TEST(Identity, BinomialCrossOracle) {
  for (auto P : {fx::pauli(), fx::heisenberg()}) {
    GradedAlgebra A(P);
    const Cocycle& alpha = P.alpha;
    const int m = alpha.modulus();
    int checked = 0;
    while (checked < 60) {
      const int r = fx::uniform(2, 3);
      std::vector<Elem> word;
      for (int i = 0; i < r; ++i) word.push_back(P.H.elements()[fx::uniform(0, P.H.order() - 1)]);
      std::vector<int> perm(r);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), fx::rng());
      Elem a = 0, b = 0;
      for (int i = 0; i < r; ++i) {
        a = P.group().mul(a, word[i]);
        b = P.group().mul(b, word[perm[i]]);
      }
      if (a != b) continue;
      const int z = fx::uniform(0, m - 1);
      GradedPolynomial p;
      std::vector<int> ids(r);
      std::iota(ids.begin(), ids.end(), 0);
      for (int i = 0; i < r; ++i) p.addVar(i, word[i]);
      p.addMonomial(I(1), ids);
      p.addMonomial(-CycScalar::root(m, z), perm);
      EXPECT_EQ(isIdentity(p, A).isIdentity, isBinomialIdentity(alpha, word, perm, z, m));
      ++checked;
    }
  }
}

TEST(Identity, BudgetReportsExactSize) {
  GradedAlgebra A(fx::eeg());
  GradedPolynomial p;
  std::vector<int> seq;
  for (int v = 0; v < 4; ++v) {
    p.addVar(v, 0);
    seq.push_back(v);
  }
  p.addMonomial(I(1), seq);
  IdentityOptions opt;
  opt.budget = 100;
  try {
    isIdentity(p, A, opt);
    FAIL() << "budget not enforced";
  } catch (const BudgetError& e) {
    EXPECT_NE(std::string(e.what()).find("625"), std::string::npos) << e.what();
  }
  opt.budget = 625;
  EXPECT_FALSE(isIdentity(p, A, opt).isIdentity);
}

TEST(Identity, FalsifierIndependentOfWorkers) {
  GradedAlgebra A(fx::d6());
  auto p = poly({{0, 3}, {1, 3}, {2, 0}}, {{I(1), {0, 1, 2}}, {I(-1), {2, 0, 1}}});
  IdentityOptions one, many;
  one.workers = 1;
  many.workers = 4;
  auto a = isIdentity(p, A, one), b = isIdentity(p, A, many);
  ASSERT_FALSE(a.isIdentity);
  EXPECT_EQ(a.falsifying, b.falsifying);
}

TEST(Identity, NonMultilinearViaLinearization) {
  GradedAlgebra A(fx::pauli());
  // u_a^2 is central, so x_a^2 y_b - y_b x_a^2 vanishes; x_a^2 alone does not
  auto central = poly({{0, 1}, {1, 2}}, {{I(1), {0, 0, 1}}, {I(-1), {1, 0, 0}}});
  auto rep = isIdentity(central, A);
  EXPECT_TRUE(rep.isIdentity);
  EXPECT_TRUE(rep.linearized);
  EXPECT_FALSE(isIdentity(poly({{0, 1}}, {{I(1), {0, 0}}}), A).isIdentity);
  // non-multihomogeneous input splits into components
  auto split = poly({{0, 1}, {1, 2}}, {{I(1), {0, 1}}, {I(1), {1, 0}}, {I(1), {0, 0, 1}}, {I(-1), {1, 0, 0}}});
  EXPECT_TRUE(isIdentity(split, A).isIdentity);
}

TEST(Linearize, MultilinearUnchanged) {
  auto p = poly({{0, 1}, {1, 0}}, {{I(2), {0, 1}}, {I(-1), {1, 0}}});
  EXPECT_EQ(linearize(p), p);
}

TEST(Linearize, Square) {
  auto p = poly({{0, 1}}, {{I(1), {0, 0}}});
  auto expected = poly({{1, 1}, {2, 1}}, {{I(1), {1, 2}}, {I(1), {2, 1}}});
  EXPECT_EQ(linearize(p), expected);
}

TEST(Linearize, SquareTimesY) {
  auto p = poly({{0, 1}, {1, 0}}, {{I(1), {0, 0, 1}}});
  auto expected = poly({{1, 0}, {2, 1}, {3, 1}}, {{I(1), {2, 3, 1}}, {I(1), {3, 2, 1}}});
  EXPECT_EQ(linearize(p), expected);
}

TEST(Linearize, CollapseRecoversFactorialMultiple) {
  for (int trial = 0; trial < 30; ++trial) {
    // random multihomogeneous polynomial: permutations of one variable multiset
    std::vector<int> word;
    const int vars = fx::uniform(1, 2);
    for (int v = 0; v < vars; ++v)
      for (int c = fx::uniform(1, 3); c > 0; --c) word.push_back(v);
    std::sort(word.begin(), word.end());
    GradedPolynomial p;
    for (int v = 0; v < vars; ++v) p.addVar(v, fx::uniform(0, 1));
    do {
      if (fx::uniform(0, 1)) p.addMonomial(I(fx::uniform(-3, 3)), word);
    } while (std::next_permutation(word.begin(), word.end()));
    p = p.combined();
    if (p.isZero()) continue;
    auto lin = linearize(p);
    ASSERT_TRUE(lin.isMultilinear());
    // each fresh block of variables collapses back onto one original variable
    auto counts = p.variableCounts(p.monomials().front());
    std::map<int, int> back;
    long long scale = 1;
    int next = p.maxVarId() + 1;
    // replay the elimination order used by linearize
    auto remaining = counts;
    while (true) {
      int x = -1, k = 1;
      for (auto [v, c] : remaining)
        if (c > k) {
          k = c;
          x = v;
        }
      if (x < 0) break;
      for (int r = 0; r < k; ++r) back[next + r] = x;
      for (int r = 2; r <= k; ++r) scale *= r;
      remaining.erase(x);
      next += k;
    }
    EXPECT_EQ(renameVariables(lin, back), p.scaled(I(scale))) << p.str();
  }
}

TEST(Linearize, RejectsMixedMultidegree) {
  auto p = poly({{0, 1}, {1, 0}}, {{I(1), {0}}, {I(1), {1}}});
  EXPECT_THROW(linearize(p), PreconditionError);
}

TEST(Good, SmallExamples) {
  auto G = catalog::cyclic(2);
  SubgroupData H(G, {0});
  auto p = poly({{0, 1}, {1, 1}, {2, 1}, {3, 1}}, {});
  EXPECT_TRUE(isGoodPermutation(p, H, {0, 1}, {0, 1}));
  EXPECT_FALSE(isGoodPermutation(p, H, {0, 1}, {1, 0}));
  EXPECT_TRUE(isGoodPermutation(p, H, {0, 1, 2, 3}, {2, 3, 0, 1}));
  EXPECT_THROW(isGoodPermutation(p, H, {0, 1}, {0, 2}), PreconditionError);
}

TEST(Good, IsAnEquivalenceRelation) {
  auto G = catalog::dihedral(3);
  SubgroupData H(G, {0, 1, 2});
  for (int trial = 0; trial < 40; ++trial) {
    GradedPolynomial p;
    std::vector<int> Z;
    for (int v = 0; v < 4; ++v) {
      p.addVar(v, fx::uniform(0, 5));
      Z.push_back(v);
    }
    std::vector<std::vector<int>> perms;
    auto q = Z;
    do {
      perms.push_back(q);
    } while (std::next_permutation(q.begin(), q.end()));
    const auto& a = perms[fx::uniform(0, 23)];
    const auto& b = perms[fx::uniform(0, 23)];
    const auto& c = perms[fx::uniform(0, 23)];
    EXPECT_TRUE(isGoodPermutation(p, H, a, a));
    EXPECT_EQ(isGoodPermutation(p, H, a, b), isGoodPermutation(p, H, b, a));
    if (isGoodPermutation(p, H, a, b) && isGoodPermutation(p, H, b, c)) { EXPECT_TRUE(isGoodPermutation(p, H, a, c)); }
  }
}

TEST(Pure, SplitsCommutator) {
  auto G = catalog::cyclic(2);
  SubgroupData H(G, {0});
  auto p = poly({{0, 1}, {1, 1}}, {{I(1), {0, 1}}, {I(-1), {1, 0}}});
  auto parts = pureSplit(p, H);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0] + parts[1], p);
  EXPECT_THROW(pureSplit(poly({{0, 1}}, {{I(1), {0, 0}}}), H), PreconditionError);
}

TEST(Path, SmallExamples) {
  GradedAlgebra A(fx::z2Pair());
  auto xy = poly({{0, 1}, {1, 1}}, {{I(1), {0, 1}}});
  auto rep = pathCheck(xy, A);
  EXPECT_FALSE(rep.vanishesOnPath[0]);
  EXPECT_FALSE(rep.isIdentity);
  EXPECT_TRUE(rep.violations.empty());
  auto sup = fx::firstPathOneSupport(xy, A, 0);
  ASSERT_TRUE(sup.has_value());
  EXPECT_EQ(A.basis(sup->second).i, 0);
  EXPECT_EQ(A.basis(sup->second).j, 0);

  auto comm = poly({{0, 1}, {1, 1}}, {{I(1), {0, 1}}, {I(-1), {1, 0}}});
  EXPECT_THROW(pathCheck(comm, A), PreconditionError);
  for (const auto& part : pureSplit(comm, A.presentation().H)) {
    auto r = pathCheck(part, A);
    EXPECT_FALSE(r.vanishesOnPath[0]);
    EXPECT_TRUE(r.violations.empty());
  }
  auto zero = pathCheck(GradedPolynomial{}, A);
  EXPECT_TRUE(zero.isIdentity);
  for (bool b : zero.vanishesOnPath) EXPECT_TRUE(b);
}

TEST(Path, RejectsRepeatedCosets) {
  GradedAlgebra A(fx::eeg());
  EXPECT_THROW(pathCheck(poly({{0, 1}}, {{I(1), {0}}}), A), PreconditionError);
}

TEST(Path, GoodPermutationsShareTheDiagonalBlock) {
  // facts (1) and (2) for e-degree monomials, every path assignment
  for (const auto& P : fx::multiplicityOne()) {
    GradedAlgebra A(P);
    const Group& G = A.group();
    for (int trial = 0; trial < 6; ++trial) {
      GradedPolynomial p;
      const int r = 3;
      std::vector<int> Z{0, 1, 2};
      Elem last = 0;
      for (int v = 0; v + 1 < r; ++v) {
        const Elem d = fx::uniform(0, G.order() - 1);
        p.addVar(v, d);
        last = G.mul(last, d);
      }
      p.addVar(r - 1, G.inv(last));
      std::vector<std::size_t> c(r, 0);
      std::vector<int> sigma = Z;
      do {
        const bool good = isGoodPermutation(p, P.H, Z, sigma);
        std::fill(c.begin(), c.end(), 0);
        while (true) {
          Assignment a;
          for (int v = 0; v < r; ++v) a[v] = A.homogeneous(p.degreeOf(v))[c[v]];
          GradedPolynomial z = p, zs = p;
          z.addMonomial(I(1), Z);
          zs.addMonomial(I(1), sigma);
          auto vz = evaluate(z, A, a);
          if (!vz.isZero()) {
            auto vs = evaluate(zs, A, a);
            const int row = A.basis(vz.terms().begin()->first).i;
            if (good) {
              ASSERT_FALSE(vs.isZero());
              EXPECT_EQ(A.basis(vs.terms().begin()->first).i, row);
            } else if (!vs.isZero()) {
              EXPECT_NE(A.basis(vs.terms().begin()->first).i, row);
            }
          }
          int pos = r;
          while (pos > 0 && ++c[pos - 1] == A.homogeneous(p.degreeOf(pos - 1)).size()) c[--pos] = 0;
          if (pos == 0) break;
        }
      } while (std::next_permutation(sigma.begin(), sigma.end()));
    }
  }
}

TEST(Path, RandomPureKPolynomials) {
  int identities = 0;
  for (const auto& P : fx::multiplicityOne()) {
    GradedAlgebra A(P);
    const auto k = minimalField(P);
    for (int trial = 0; trial < 6; ++trial) {
      auto p = fx::randomPurePolynomial(A, k, trial % 2 == 0);
      auto rep = pathCheck(p, A);
      EXPECT_TRUE(rep.violations.empty()) << p.str();
      EXPECT_EQ(rep.vanishesOnPath[0], rep.isIdentity);
      identities += rep.isIdentity;
    }
  }
  EXPECT_GT(identities, 0);
}
