#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gforge/twisted.hpp"

using namespace gforge;

namespace {

Cocycle randomShift(const Cocycle& alpha) {
  std::vector<long long> f(alpha.size(), 0);
  for (int i = 1; i < alpha.size(); ++i) f[i] = fx::uniform(0, alpha.modulus() - 1);
  return shiftByCoboundary(alpha, f);
}

/// Exhaustive coboundary search over f: H -> Z/M, the independent oracle.
bool bruteCohomologous(const Cocycle& a, const Cocycle& b, int M) {
  const int k = a.size();
  std::vector<int> f(k, 0);
  const int sa = M / a.modulus(), sb = M / b.modulus();
  while (true) {
    bool ok = true;
    for (int x = 0; x < k && ok; ++x)
      for (int y = 0; y < k && ok; ++y) {
        const int d = f[x] + f[y] - f[a.lmul(x, y)];
        ok = modPositive(b.at(x, y) * sb - a.at(x, y) * sa - d, M) == 0;
      }
    if (ok) return true;
    int p = 1;
    while (p < k && ++f[p] == M) f[p++] = 0;
    if (p == k) return false;
  }
}

}  // namespace

TEST(Cocycle, ValidationExamples) {
  auto P = fx::pauli();
  EXPECT_TRUE(validateCocycle(P.alpha));
  EXPECT_TRUE(validateCocycle(Cocycle::trivial(P.H)));
  std::vector<int> bad(16, 0);
  bad[1] = 1;  // exps[e][a] != 0
  EXPECT_FALSE(validateCocycle(Cocycle(P.H, 2, bad)));
  EXPECT_THROW(Cocycle(P.H, 2, std::vector<int>(9, 0)), PreconditionError);
}

TEST(Cocycle, PauliRatioIsMinusOne) {
  auto P = fx::pauli();
  std::vector<Elem> w{1, 2};
  std::vector<int> swap{1, 0};
  EXPECT_EQ(binomialRatio(P.alpha, w, swap), 1);
  EXPECT_TRUE(isBinomialIdentity(P.alpha, w, swap, 1, 2));
  EXPECT_FALSE(isBinomialIdentity(P.alpha, w, swap, 0, 1));
  std::vector<int> id{0, 1};
  EXPECT_EQ(binomialRatio(P.alpha, w, id), 0);
}

TEST(Cocycle, RatioNeedsEqualProducts) {
  auto G = catalog::dihedral(3);
  SubgroupData H(G, {0, 1, 2, 3, 4, 5});
  auto a = Cocycle::trivial(H, 2);
  std::vector<Elem> w{1, 3};
  std::vector<int> swap{1, 0};
  EXPECT_THROW(binomialRatio(a, w, swap), PreconditionError);
}

TEST(Cocycle, WordValueIsAssociative) {
  auto P = fx::heisenberg();
  for (int trial = 0; trial < 100; ++trial) {
    const int r = fx::uniform(2, 5);
    std::vector<Elem> w;
    for (int i = 0; i < r; ++i) w.push_back(fx::uniform(0, 8));
    const int cut = fx::uniform(1, r - 1);
    std::vector<Elem> left(w.begin(), w.begin() + cut), right(w.begin() + cut, w.end());
    auto [el, pl] = wordValue(P.alpha, left);
    auto [er, pr] = wordValue(P.alpha, right);
    auto [e, p] = wordValue(P.alpha, w);
    EXPECT_EQ(p, P.group().mul(pl, pr));
    EXPECT_EQ(modPositive(el + er + P.alpha(pl, pr), 3), e);
  }
}

TEST(Cocycle, RatioIsCompositional) {
  auto P = fx::heisenberg();
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Elem> w;
    for (int i = 0; i < 3; ++i) w.push_back(fx::uniform(0, 8));
    std::vector<int> t1{0, 1, 2}, t2{0, 1, 2};
    std::shuffle(t1.begin(), t1.end(), fx::rng());
    std::shuffle(t2.begin(), t2.end(), fx::rng());
    std::vector<int> t12(3);
    for (int i = 0; i < 3; ++i) t12[i] = t2[t1[i]];
    std::vector<Elem> w2(3);
    for (int i = 0; i < 3; ++i) w2[i] = w[t2[i]];
    EXPECT_EQ(binomialRatio(P.alpha, w, t12), modPositive(binomialRatio(P.alpha, w, t2) + binomialRatio(P.alpha, w2, t1), 3));
  }
}

TEST(MuN, Examples) {
  EXPECT_EQ(imageMuN(Cocycle::trivial(fx::pauli().H, 4)).n, 1);
  EXPECT_EQ(imageMuN(fx::pauli().alpha, 2).n, 2);
  auto h = imageMuN(fx::heisenberg().alpha, 2);
  EXPECT_EQ(h.n, 3);
  EXPECT_THROW(imageMuN(fx::pauli().alpha, 1), PreconditionError);
}

TEST(MuN, InvariantUnderCoboundaryShift) {
  auto a = fx::heisenberg().alpha.promote(9);
  for (int trial = 0; trial < 5; ++trial) EXPECT_EQ(imageMuN(randomShift(a), 3).n, 3);
}

TEST(Transform, ConjugateBySwapExchangesCoordinates) {
  auto P = fx::swapCase();
  auto c = conjugateCocycle(P.alpha, 9);
  EXPECT_TRUE(validateCocycle(c));
  for (int a = 0; a < 9; ++a)
    for (int b = 0; b < 9; ++b) EXPECT_EQ(c.at(a, b), (a % 3) * ((b / 3) % 3) % 3);
}

TEST(Transform, GaloisDoublesAndCommutesWithConjugation) {
  auto P = fx::swapCase();
  auto g = galoisCocycle(P.alpha, 2);
  for (int i = 0; i < 81; ++i) EXPECT_EQ(g.exps()[i], 2 * P.alpha.exps()[i] % 3);
  EXPECT_EQ(galoisCocycle(conjugateCocycle(P.alpha, 9), 2), conjugateCocycle(galoisCocycle(P.alpha, 2), 9));
  EXPECT_THROW(galoisCocycle(P.alpha, 3), PreconditionError);
  EXPECT_EQ(transformCocycle(P.alpha, {CocycleTransform::Mode::Galois, 1}), P.alpha);
  EXPECT_EQ(transformCocycle(P.alpha, {CocycleTransform::Mode::Conjugate, 0}), P.alpha);
}

TEST(Transform, ConjugationOutsideNormalizerRejected) {
  auto G = catalog::dihedral(3);
  SubgroupData H(G, {0, 3});
  EXPECT_THROW(transformCocycle(Cocycle::trivial(H, 2), {CocycleTransform::Mode::Conjugate, 1}), PreconditionError);
}

TEST(Cohomology, PauliIsNotTrivial) {
  auto P = fx::pauli();
  EXPECT_FALSE(isCohomologous(P.alpha, Cocycle::trivial(P.H, 2)).has_value());
  EXPECT_FALSE(bruteCohomologous(Cocycle::trivial(P.H, 2), P.alpha, 4));
  auto f = isCohomologous(P.alpha, P.alpha);
  ASSERT_TRUE(f.has_value());
  for (auto x : *f) EXPECT_EQ(x, 0);
}

TEST(Cohomology, ShiftedCocyclesAreCohomologousWithWitness) {
  for (auto P : {fx::pauli(), fx::heisenberg()}) {
    for (int trial = 0; trial < 10; ++trial) {
      auto b = randomShift(P.alpha);
      auto f = isCohomologous(P.alpha, b);
      ASSERT_TRUE(f.has_value());
      EXPECT_TRUE(bruteCohomologous(P.alpha, b, P.alpha.modulus()));
    }
  }
}

TEST(Cohomology, AgreesWithBruteForceOnKlein) {
  auto P = fx::pauli();
  auto classes = h2Classes(P.H, 2);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = randomShift(classes[fx::uniform(0, 1)]);
    auto b = randomShift(classes[fx::uniform(0, 1)]);
    EXPECT_EQ(isCohomologous(a, b).has_value(), bruteCohomologous(a, b, 4));
  }
}

TEST(Cohomology, IsAnEquivalenceRelation) {
  auto P = fx::heisenberg();
  std::vector<Cocycle> pool;
  for (auto c : h2Classes(P.H, 3))
    for (int i = 0; i < 2; ++i) pool.push_back(randomShift(c));
  for (const auto& a : pool) {
    EXPECT_TRUE(isCohomologous(a, a));
    for (const auto& b : pool) {
      EXPECT_EQ(isCohomologous(a, b).has_value(), isCohomologous(b, a).has_value());
      for (const auto& c : pool)
        if (isCohomologous(a, b) && isCohomologous(b, c)) { EXPECT_TRUE(isCohomologous(a, c)); }
    }
  }
}

TEST(H2, CyclicGroupsHaveOneClass) {
  for (int n = 1; n <= 16; ++n) {
    auto G = catalog::cyclic(n);
    std::vector<Elem> all;
    for (int i = 0; i < n; ++i) all.push_back(i);
    SubgroupData H(G, all);
    auto classes = h2Classes(H, n);
    EXPECT_EQ(classes.size(), 1u) << "n=" << n;
    for (const auto& c : classes) EXPECT_TRUE(isCohomologous(c, Cocycle::trivial(H, n)));
  }
}

TEST(H2, KleinAndZ3SquaredCounts) {
  auto K = fx::pauli().H;
  auto k2 = h2Classes(K, 2);
  EXPECT_EQ(k2.size(), 2u);
  auto Z = fx::heisenberg().H;
  auto z3 = h2Classes(Z, 3);
  EXPECT_EQ(z3.size(), 3u);
  // the classes are told apart by the swap ratio of (a, b)
  std::set<int> ratios;
  std::vector<Elem> w{1, 3};
  std::vector<int> swap{1, 0};
  for (const auto& c : z3) ratios.insert(binomialRatio(c, w, swap));
  EXPECT_EQ(ratios, (std::set<int>{0, 1, 2}));
}

TEST(H2, CapIsEnforced) {
  auto G = catalog::cyclic(17);
  std::vector<Elem> all;
  for (int i = 0; i < 17; ++i) all.push_back(i);
  EXPECT_THROW(h2Classes(SubgroupData(G, all), 17), BudgetError);
}

TEST(BAlpha, SwapPreservesKernel) {
  auto P = fx::swapCase();
  EXPECT_TRUE(normalizesBAlpha(0, P.alpha, 3));
  EXPECT_TRUE(normalizesBAlpha(9, P.alpha, 3));
  auto triv = Cocycle::trivial(P.H, 3);
  EXPECT_TRUE(normalizesBAlpha(9, triv, 3));
}

TEST(BAlpha, KernelBreakingElementDetected) {
  // (Z2)^3 x| Z3 with alpha pairing two coordinates; the 3-cycle moves the pairing.
  auto G = Group::fromPermutations({{1, 0, 2, 3, 4, 5}, {0, 1, 3, 2, 4, 5}, {0, 1, 2, 3, 5, 4}, {2, 3, 4, 5, 0, 1}}, 6);
  auto Gp = makeGroup(G);
  // H = the three commuting transpositions
  auto sub = Gp->generated(std::vector<Elem>{1, 2, 3});
  SubgroupData Hs(Gp, sub);
  ASSERT_EQ(Hs.order(), 8);
  std::vector<int> e(64, 0);
  // alpha = product of bit 1 of x and bit 0 of y, using local coordinates
  // of the generators 1, 2, 3
  auto coords = [&](Elem x) {
    for (int m = 0; m < 8; ++m) {
      Elem p = 0;
      if (m & 1) p = Gp->mul(p, 1);
      if (m & 2) p = Gp->mul(p, 2);
      if (m & 4) p = Gp->mul(p, 3);
      if (p == x) return m;
    }
    return -1;
  };
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) e[a * 8 + b] = ((coords(sub[a]) >> 1) & 1) * (coords(sub[b]) & 1);
  Cocycle alpha(Hs, 2, e);
  ASSERT_TRUE(validateCocycle(alpha));
  // the 3-cycle of coordinates normalizes H and moves the pairing to other coordinates
  bool someBreak = false;
  for (Elem g : Hs.normalizer()) someBreak |= !normalizesBAlpha(g, alpha, 2);
  EXPECT_TRUE(someBreak);
}

TEST(Galois, SwapActsByInversion) {
  auto P = fx::swapCase();
  EXPECT_EQ(galoisActionOfS(0, P.alpha, 3), 1);
  EXPECT_EQ(galoisActionOfS(9, P.alpha, 3), 2);
  for (Elem h : P.H.elements()) EXPECT_EQ(galoisActionOfS(h, P.alpha, 3), 1);
}

TEST(Galois, ActionIsMultiplicative) {
  auto P = fx::swapCase();
  const Group& G = P.group();
  for (Elem a = 0; a < G.order(); ++a)
    for (Elem b = 0; b < G.order(); b += 5) {
      const int ja = galoisActionOfS(a, P.alpha, 3, 2), jb = galoisActionOfS(b, P.alpha, 3, 2);
      EXPECT_EQ(galoisActionOfS(G.mul(a, b), P.alpha, 3, 2), ja * jb % 3);
    }
}

TEST(BAlpha, CohomologousShortcutMatchesEnumeration) {
  for (const auto& P : {fx::swapCase(), fx::pauli(), fx::heisenberg()}) {
    const SubgroupData& H = P.H;
    for (Elem g : H.normalizer()) {
      Cocycle conj = conjugateCocycle(P.alpha, g);
      Cocycle aligned(H, conj.modulus(), conj.exps());
      EXPECT_EQ(normalizesBAlpha(g, P.alpha, 3), binomialKernelsAgree(P.alpha, aligned, 3));
    }
  }
}

TEST(Binomial, RatiosAreCohomologyInvariants) {
  auto P = fx::swapCase();
  const auto& H = P.H.elements();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<long long> f(H.size(), 0);
    for (std::size_t i = 1; i < f.size(); ++i) f[i] = fx::uniform(0, P.alpha.modulus() - 1);
    Cocycle beta = shiftByCoboundary(P.alpha, f);
    std::vector<Elem> word;
    for (int i = 0; i < 3; ++i) word.push_back(H[fx::uniform(0, static_cast<int>(H.size()) - 1)]);
    std::vector<int> perm{2, 0, 1};
    EXPECT_EQ(binomialRatio(P.alpha, word, perm), binomialRatio(beta, word, perm));
  }
}
