#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gforge/group.hpp"

namespace gforge::catalog {

/// Names every element by a shortest word in the generators (BFS order of
/// discovery, runs of a letter folded into powers).
inline std::vector<std::string> wordNames(const Group& G, const std::vector<Elem>& gens, const std::vector<std::string>& letters) {
  std::vector<std::vector<int>> word(G.order());
  std::vector<char> seen(G.order(), 0);
  std::vector<Elem> queue{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const Elem x = G.mul(queue[head], gens[k]);
      if (seen[x]) continue;
      seen[x] = 1;
      word[x] = word[queue[head]];
      word[x].push_back(static_cast<int>(k));
      queue.push_back(x);
    }
  std::vector<std::string> names(G.order());
  for (Elem g = 0; g < G.order(); ++g) {
    if (!seen[g]) throw PreconditionError("generators do not generate the group");
    if (word[g].empty()) {
      names[g] = "e";
      continue;
    }
    std::string s;
    for (std::size_t i = 0; i < word[g].size();) {
      std::size_t j = i;
      while (j < word[g].size() && word[g][j] == word[g][i]) ++j;
      s += letters[word[g][i]];
      if (j - i > 1) s += "^" + std::to_string(j - i);
      i = j;
    }
    names[g] = s;
  }
  return names;
}

/// Group on {0..n-1} from a multiplication callback with identity 0.
inline Group fromOperation(int n, const std::function<int(int, int)>& op, std::vector<std::string> names = {}) {
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = op(a, b);
  return Group::fromTable(table, std::move(names));
}

inline GroupPtr cyclic(int n) {
  std::vector<std::string> names{"e"};
  for (int k = 1; k < n; ++k) names.push_back(k == 1 ? "g" : "g^" + std::to_string(k));
  return makeGroup(fromOperation(n, [n](int a, int b) { return (a + b) % n; }, names));
}

/// Dihedral group of order 2n: element s^a t^b stored as a + n b, t s t = s^-1.
inline GroupPtr dihedral(int n) {
  auto op = [n](int x, int y) {
    const int a = x % n, b = x / n, c = y % n, d = y / n;
    const int r = b == 0 ? (a + c) % n : ((a - c) % n + n) % n;
    return r + n * ((b + d) % 2);
  };
  std::vector<std::string> names;
  for (int b = 0; b < 2; ++b)
    for (int a = 0; a < n; ++a) {
      std::string s = a == 0 ? "" : (a == 1 ? "s" : "s^" + std::to_string(a));
      if (b) s += "t";
      names.push_back(s.empty() ? "e" : s);
    }
  return makeGroup(fromOperation(2 * n, op, names));
}

/// Direct product; (a, b) is stored as a + |A| b.
inline GroupPtr product(const Group& A, const Group& B) {
  const int p = A.order(), q = B.order();
  std::vector<std::string> names;
  for (int b = 0; b < q; ++b)
    for (int a = 0; a < p; ++a) names.push_back(a == 0 && b == 0 ? "e" : "(" + A.name(a) + "," + B.name(b) + ")");
  auto op = [&](int x, int y) { return A.mul(x % p, y % p) + p * B.mul(x / p, y / p); };
  return makeGroup(fromOperation(p * q, op, names));
}

/// (Z/n)^2 with (a1, a2) stored as a1 + n a2.
inline GroupPtr square(int n) {
  std::vector<std::string> names;
  for (int a2 = 0; a2 < n; ++a2)
    for (int a1 = 0; a1 < n; ++a1) names.push_back(a1 == 0 && a2 == 0 ? "e" : "(" + std::to_string(a1) + "," + std::to_string(a2) + ")");
  auto op = [n](int x, int y) { return (x % n + y % n) % n + n * ((x / n + y / n) % n); };
  return makeGroup(fromOperation(n * n, op, names));
}

/// (Z/n)^2 x| Z2 with Z2 swapping coordinates; (a1, a2, c) stored as a1 + n a2 + n^2 c.
inline GroupPtr swapProduct(int n) {
  const int nn = n * n;
  auto op = [n, nn](int x, int y) {
    const int a1 = x % n, a2 = (x / n) % n, c = x / nn;
    int b1 = y % n, b2 = (y / n) % n;
    const int d = y / nn;
    if (c) std::swap(b1, b2);
    return (a1 + b1) % n + n * ((a2 + b2) % n) + nn * ((c + d) % 2);
  };
  std::vector<std::string> names;
  for (int c = 0; c < 2; ++c)
    for (int a2 = 0; a2 < n; ++a2)
      for (int a1 = 0; a1 < n; ++a1) {
        std::string s = "(" + std::to_string(a1) + "," + std::to_string(a2) + ")";
        if (a1 == 0 && a2 == 0) s = c ? "t" : "e";
        else if (c) s += "t";
        names.push_back(s);
      }
  return makeGroup(fromOperation(2 * nn, op, names));
}

/// Quaternion group: +-1, +-i, +-j, +-k.
inline GroupPtr quaternion() {
  // element = sign * unit with unit in {1, i, j, k}; stored as unit + 4 * (sign < 0)
  static const int unitMul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int signMul[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  auto op = [](int x, int y) {
    const int u = x % 4, v = y % 4;
    const int s = (x / 4 + y / 4 + signMul[u][v]) % 2;
    return unitMul[u][v] + 4 * s;
  };
  return makeGroup(fromOperation(8, op, {"e", "i", "j", "k", "-1", "-i", "-j", "-k"}));
}

}  // namespace gforge::catalog
