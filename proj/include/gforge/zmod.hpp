#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "gforge/cyclo.hpp"
#include "gforge/error.hpp"

namespace gforge::zmod {

using i64 = long long;

inline i64 reduce(i64 a, i64 M) {
  i64 r = a % M;
  return r < 0 ? r + M : r;
}

struct Bezout {
  i64 g, s, t;  // s*a + t*b = g
};

inline Bezout extendedGcd(i64 a, i64 b) {
  i64 r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    i64 q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
    std::tie(t0, t1) = std::make_pair(t1, t0 - q * t1);
  }
  return {r0, s0, t0};
}

/// U A V = D over Z/M with D diagonal (no divisibility chain is enforced).
/// Row operations are logged rather than stored as a dense U, since the
/// coboundary systems have |H|^2 rows but few columns.
class Diagonalization {
public:
  Diagonalization(std::vector<std::vector<i64>> A, i64 M, int cols) : M_(M), rows_(static_cast<int>(A.size())), cols_(cols) {
    if (M <= 0) throw PreconditionError("modulus must be positive");
    for (auto& row : A) {
      if (static_cast<int>(row.size()) != cols) throw InternalError("ragged matrix");
      for (auto& x : row) x = reduce(x, M);
    }
    V_.assign(static_cast<std::size_t>(cols) * cols, 0);
    for (int i = 0; i < cols; ++i) V_[i * cols + i] = 1;
    run(A);
  }

  i64 modulus() const { return M_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  /// Diagonal entry i, 0 beyond the square part.
  i64 diag(int i) const { return i < static_cast<int>(diag_.size()) ? diag_[i] : 0; }

  std::vector<i64> applyU(std::vector<i64> b) const {
    for (const auto& op : ops_) apply(op, b);
    return b;
  }

  std::vector<i64> applyUInverse(std::vector<i64> b) const {
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) apply(inverse(*it), b);
    return b;
  }

  /// Some x with A x = b, or nothing.
  std::optional<std::vector<i64>> solve(const std::vector<i64>& b) const {
    auto c = applyU(b);
    std::vector<i64> y(cols_, 0);
    for (int i = 0; i < rows_; ++i) {
      const i64 d = diag(i);
      const i64 g = std::gcd(d, M_);
      if (c[i] % g != 0) return std::nullopt;
      if (i >= cols_ || d == 0) continue;
      const i64 mod = M_ / g;
      y[i] = mod == 1 ? 0 : reduce((c[i] / g) % mod * inverseMod(d / g, mod), mod);
    }
    return applyV(y);
  }

  /// Generators of the kernel {x : A x = 0}.
  std::vector<std::vector<i64>> kernel() const {
    std::vector<std::vector<i64>> gens;
    for (int i = 0; i < cols_; ++i) {
      const i64 d = i < rows_ ? diag(i) : 0;
      const i64 step = M_ / std::gcd(d, M_);
      if (step == M_) continue;
      std::vector<i64> y(cols_, 0);
      y[i] = step;
      gens.push_back(applyV(y));
    }
    return gens;
  }

  /// Canonical coordinates of b modulo the image of A.
  std::vector<i64> key(const std::vector<i64>& b) const {
    auto c = applyU(b);
    for (int i = 0; i < rows_; ++i) c[i] = reduce(c[i], std::gcd(diag(i), M_));
    return c;
  }

  /// The representative of b + Im(A) determined by key(b).
  std::vector<i64> canonical(const std::vector<i64>& b) const {
    auto c = applyUInverse(key(b));
    for (auto& x : c) x = reduce(x, M_);
    return c;
  }

private:
  struct Op {
    int i, j;
    i64 a, b, c, d;  // (r_i, r_j) <- (a r_i + b r_j, c r_i + d r_j), det = +-1
    int det;
  };

  static Op inverse(const Op& op) {
    return {op.i, op.j, op.det * op.d, -op.det * op.b, -op.det * op.c, op.det * op.a, op.det};
  }

  void apply(const Op& op, std::vector<i64>& v) const {
    const i64 x = v[op.i], y = v[op.j];
    v[op.i] = reduce(mulmod(op.a, x) + mulmod(op.b, y), M_);
    v[op.j] = reduce(mulmod(op.c, x) + mulmod(op.d, y), M_);
  }

  i64 mulmod(i64 a, i64 b) const { return static_cast<i64>((static_cast<__int128>(reduce(a, M_)) * reduce(b, M_)) % M_); }

  std::vector<i64> applyV(const std::vector<i64>& y) const {
    std::vector<i64> x(cols_, 0);
    for (int r = 0; r < cols_; ++r) {
      i64 acc = 0;
      for (int k = 0; k < cols_; ++k)
        if (y[k] != 0) acc = reduce(acc + mulmod(V_[r * cols_ + k], y[k]), M_);
      x[r] = acc;
    }
    return x;
  }

  void rowOp(std::vector<std::vector<i64>>& A, const Op& op) {
    auto& ri = A[op.i];
    auto& rj = A[op.j];
    for (int k = 0; k < cols_; ++k) {
      const i64 x = ri[k], y = rj[k];
      if (x == 0 && y == 0) continue;
      ri[k] = reduce(mulmod(op.a, x) + mulmod(op.b, y), M_);
      rj[k] = reduce(mulmod(op.c, x) + mulmod(op.d, y), M_);
    }
    ops_.push_back(op);
  }

  void colOp(std::vector<std::vector<i64>>& A, int i, int j, i64 a, i64 b, i64 c, i64 d) {
    // (col_i, col_j) <- (a col_i + b col_j, c col_i + d col_j)
    for (auto& row : A) {
      const i64 x = row[i], y = row[j];
      if (x == 0 && y == 0) continue;
      row[i] = reduce(mulmod(a, x) + mulmod(b, y), M_);
      row[j] = reduce(mulmod(c, x) + mulmod(d, y), M_);
    }
    for (int r = 0; r < cols_; ++r) {
      const i64 x = V_[r * cols_ + i], y = V_[r * cols_ + j];
      V_[r * cols_ + i] = reduce(mulmod(a, x) + mulmod(b, y), M_);
      V_[r * cols_ + j] = reduce(mulmod(c, x) + mulmod(d, y), M_);
    }
  }

  void run(std::vector<std::vector<i64>>& A) {
    const int steps = std::min(rows_, cols_);
    for (int t = 0; t < steps; ++t) {
      // bring some nonzero entry of the trailing block to (t, t)
      int pr = -1, pc = -1;
      for (int c = t; c < cols_ && pr < 0; ++c)
        for (int r = t; r < rows_; ++r)
          if (A[r][c] != 0) {
            pr = r;
            pc = c;
            break;
          }
      if (pr < 0) break;
      if (pr != t) rowOp(A, {t, pr, 0, 1, 1, 0, -1});
      if (pc != t) colOp(A, t, pc, 0, 1, 1, 0);

      bool dirty = true;
      while (dirty) {
        dirty = false;
        for (int r = t + 1; r < rows_; ++r) {
          if (A[r][t] == 0) continue;
          const i64 a = A[t][t], b = A[r][t];
          if (a != 0 && b % a == 0) {
            rowOp(A, {t, r, 1, 0, -(b / a), 1, 1});
          } else {
            auto [g, s, u] = extendedGcd(a, b);
            rowOp(A, {t, r, s, u, -(b / g), a / g, 1});
          }
        }
        for (int c = t + 1; c < cols_; ++c) {
          if (A[t][c] == 0) continue;
          const i64 a = A[t][t], b = A[t][c];
          if (a != 0 && b % a == 0) {
            colOp(A, t, c, 1, 0, -(b / a), 1);
          } else {
            auto [g, s, u] = extendedGcd(a, b);
            colOp(A, t, c, s, u, -(b / g), a / g);
            dirty = true;
          }
        }
      }
    }
    diag_.assign(steps, 0);
    for (int t = 0; t < steps; ++t) diag_[t] = A[t][t];
  }

  i64 M_;
  int rows_, cols_;
  std::vector<i64> diag_;
  std::vector<Op> ops_;
  std::vector<i64> V_;
};

}  // namespace gforge::zmod
