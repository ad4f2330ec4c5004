#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gforge/zmod.hpp"

using namespace gforge;
using zmod::i64;

namespace {

std::vector<i64> apply(const std::vector<std::vector<i64>>& A, const std::vector<i64>& x, i64 M) {
  std::vector<i64> out;
  for (const auto& row : A) {
    i64 acc = 0;
    for (std::size_t k = 0; k < row.size(); ++k) acc = zmod::reduce(acc + row[k] * x[k], M);
    out.push_back(acc);
  }
  return out;
}

/// Brute-force image of A over Z/M for tiny systems.
std::set<std::vector<i64>> image(const std::vector<std::vector<i64>>& A, int cols, i64 M) {
  std::set<std::vector<i64>> img;
  std::vector<i64> x(cols, 0);
  while (true) {
    img.insert(apply(A, x, M));
    int p = 0;
    while (p < cols && ++x[p] == M) x[p++] = 0;
    if (p == cols) break;
  }
  return img;
}

}  // namespace

TEST(Zmod, SolveAgreesWithBruteForce) {
  for (int trial = 0; trial < 40; ++trial) {
    const i64 M = fx::uniform(2, 12);
    const int rows = fx::uniform(1, 3), cols = fx::uniform(1, 3);
    std::vector<std::vector<i64>> A(rows, std::vector<i64>(cols));
    for (auto& r : A)
      for (auto& x : r) x = fx::uniform(0, static_cast<int>(M) - 1);
    zmod::Diagonalization D(A, M, cols);
    auto img = image(A, cols, M);
    std::vector<i64> b(rows, 0);
    while (true) {
      auto sol = D.solve(b);
      EXPECT_EQ(sol.has_value(), img.count(b) > 0);
      if (sol) { EXPECT_EQ(apply(A, *sol, M), b); }
      int p = 0;
      while (p < rows && ++b[p] == M) b[p++] = 0;
      if (p == rows) break;
    }
  }
}

TEST(Zmod, KernelGeneratorsAreInKernel) {
  for (int trial = 0; trial < 40; ++trial) {
    const i64 M = fx::uniform(2, 30);
    const int rows = fx::uniform(1, 4), cols = fx::uniform(1, 4);
    std::vector<std::vector<i64>> A(rows, std::vector<i64>(cols));
    for (auto& r : A)
      for (auto& x : r) x = fx::uniform(0, static_cast<int>(M) - 1);
    zmod::Diagonalization D(A, M, cols);
    for (const auto& k : D.kernel()) EXPECT_EQ(apply(A, k, M), std::vector<i64>(rows, 0));
  }
}

TEST(Zmod, KeysSeparateCosetsOfTheImage) {
  for (int trial = 0; trial < 30; ++trial) {
    const i64 M = fx::uniform(2, 8);
    const int rows = fx::uniform(1, 3), cols = fx::uniform(1, 2);
    std::vector<std::vector<i64>> A(rows, std::vector<i64>(cols));
    for (auto& r : A)
      for (auto& x : r) x = fx::uniform(0, static_cast<int>(M) - 1);
    zmod::Diagonalization D(A, M, cols);
    std::vector<i64> b(rows), c(rows);
    for (auto& x : b) x = fx::uniform(0, static_cast<int>(M) - 1);
    for (auto& x : c) x = fx::uniform(0, static_cast<int>(M) - 1);
    std::vector<i64> diff(rows);
    for (int i = 0; i < rows; ++i) diff[i] = zmod::reduce(b[i] - c[i], M);
    EXPECT_EQ(D.key(b) == D.key(c), D.solve(diff).has_value());
    EXPECT_EQ(D.key(D.canonical(b)), D.key(b));
  }
}

TEST(Zmod, ExtendedGcd) {
  auto [g, s, t] = zmod::extendedGcd(240, 46);
  EXPECT_EQ(g, 2);
  EXPECT_EQ(240 * s + 46 * t, 2);
}
