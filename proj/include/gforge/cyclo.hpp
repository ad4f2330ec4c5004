#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gforge/error.hpp"

namespace gforge {

inline int eulerPhi(int n) {
  int result = n;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  if (n > 1) result -= result / n;
  return result;
}

inline int modPositive(long long a, long long m) {
  long long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

/// Units of Z/n in increasing order. By convention units(1) = {1}.
inline std::vector<int> unitsMod(int n) {
  if (n <= 1) return {1};
  std::vector<int> u;
  for (int j = 1; j < n; ++j)
    if (std::gcd(j, n) == 1) u.push_back(j);
  return u;
}

/// Subgroup of (Z/n)* generated by `gens`, sorted. Always contains 1.
inline std::vector<int> unitClosure(int n, const std::vector<int>& gens) {
  if (n <= 1) return {1};
  for (int g : gens)
    if (std::gcd(modPositive(g, n), n) != 1)
      throw PreconditionError("unit generator " + std::to_string(g) + " is not a unit mod " + std::to_string(n));
  std::vector<int> out{1};
  std::vector<char> in(n, 0);
  in[1] = 1;
  for (std::size_t head = 0; head < out.size(); ++head)
    for (int g : gens) {
      int x = modPositive(static_cast<long long>(out[head]) * g, n);
      if (!in[x]) {
        in[x] = 1;
        out.push_back(x);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline long long inverseMod(long long a, long long m) {
  if (m == 1) return 0;
  long long r0 = m, r1 = modPositive(a, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    long long q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  if (r0 != 1) throw PreconditionError(std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return modPositive(s0, m);
}

namespace detail {

inline std::vector<long long> computeCyclotomic(int m, std::map<int, std::vector<long long>>& cache) {
  if (auto it = cache.find(m); it != cache.end()) return it->second;
  // x^m - 1 = prod_{d | m} Phi_d; divide out the proper divisors.
  std::vector<long long> num(m + 1, 0);
  num[0] = -1;
  num[m] = 1;
  for (int d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    std::vector<long long> den = computeCyclotomic(d, cache);
    const int dn = static_cast<int>(num.size()) - 1, dd = static_cast<int>(den.size()) - 1;
    std::vector<long long> q(dn - dd + 1, 0);
    for (int k = dn; k >= dd; --k) {
      long long c = num[k];  // den is monic
      q[k - dd] = c;
      if (c != 0)
        for (int i = 0; i <= dd; ++i) num[k - dd + i] -= c * den[i];
    }
    num = std::move(q);
  }
  cache.emplace(m, num);
  return num;
}

/// Integer coefficients of the m-th cyclotomic polynomial, constant term first.
inline const std::vector<long long>& cyclotomicPolynomial(int m) {
  static std::mutex lock;
  static std::map<int, std::vector<long long>> cache;
  std::lock_guard<std::mutex> guard(lock);
  computeCyclotomic(m, cache);
  return cache.at(m);
}

/// Reduces a polynomial in zeta_m (any length) modulo Phi_m in place.
inline void reduceModCyclotomic(std::vector<mpq_class>& v, int m) {
  const auto& phi = cyclotomicPolynomial(m);
  const int deg = static_cast<int>(phi.size()) - 1;
  for (int k = static_cast<int>(v.size()) - 1; k >= deg; --k) {
    if (v[k] == 0) continue;
    mpq_class c = v[k];
    for (int i = 0; i <= deg; ++i)
      if (phi[i] != 0) v[k - deg + i] -= c * static_cast<long>(phi[i]);
  }
  v.resize(deg);
}

}  // namespace detail

/// Exact element of Q(zeta_m) in the power basis modulo Phi_m.
class CycScalar {
public:
  CycScalar() : m_(1), c_(1) {}
  explicit CycScalar(int m) : m_(m), c_(eulerPhi(m)) {
    if (m <= 0) throw PreconditionError("cyclotomic modulus must be positive");
  }

  static CycScalar rational(const mpq_class& q, int m = 1) {
    CycScalar x(m);
    x.c_[0] = q;
    return x;
  }
  static CycScalar integer(long long v, int m = 1) { return rational(mpq_class(static_cast<long>(v)), m); }
  static CycScalar zero(int m = 1) { return CycScalar(m); }
  static CycScalar one(int m = 1) { return rational(1, m); }

  /// zeta_m^k
  static CycScalar root(int m, long long k) {
    std::vector<mpq_class> v(m);
    v[modPositive(k, m)] = 1;
    return fromExponents(m, std::move(v));
  }

  /// Builds sum_k v[k] zeta_m^k for an arbitrary-length coefficient vector.
  static CycScalar fromExponents(int m, std::vector<mpq_class> v) {
    CycScalar x(m);
    std::vector<mpq_class> folded(m);
    for (std::size_t k = 0; k < v.size(); ++k) folded[k % m] += v[k];
    detail::reduceModCyclotomic(folded, m);
    x.c_ = std::move(folded);
    return x;
  }

  /// Builds from power-basis coordinates; the length must be phi(m).
  static CycScalar fromCoeffs(int m, std::vector<mpq_class> coeffs) {
    CycScalar x(m);
    if (coeffs.size() != x.c_.size())
      throw ParseError("scalar at modulus " + std::to_string(m) + " needs " + std::to_string(x.c_.size()) + " coefficients");
    for (auto& q : coeffs) q.canonicalize();
    x.c_ = std::move(coeffs);
    return x;
  }

  int modulus() const noexcept { return m_; }
  const std::vector<mpq_class>& coeffs() const noexcept { return c_; }

  bool isZero() const {
    return std::all_of(c_.begin(), c_.end(), [](const mpq_class& q) { return q == 0; });
  }
  bool isRational() const {
    return std::all_of(c_.begin() + 1, c_.end(), [](const mpq_class& q) { return q == 0; });
  }
  const mpq_class& constantTerm() const { return c_[0]; }

  /// Re-expresses the value in Q(zeta_M) for a multiple M of the modulus.
  CycScalar promote(int M) const {
    if (M == m_) return *this;
    if (M % m_ != 0)
      throw PreconditionError("cannot promote modulus " + std::to_string(m_) + " to " + std::to_string(M));
    const int step = M / m_;
    std::vector<mpq_class> v(M);
    for (std::size_t i = 0; i < c_.size(); ++i) v[i * step] = c_[i];
    return fromExponents(M, std::move(v));
  }

  /// The automorphism zeta_m -> zeta_m^j.
  CycScalar galois(long long j) const {
    if (m_ > 1 && std::gcd(modPositive(j, m_), m_) != 1)
      throw PreconditionError(std::to_string(j) + " is not a unit mod " + std::to_string(m_));
    if (m_ <= 2) return *this;
    std::vector<mpq_class> v(m_);
    for (std::size_t i = 0; i < c_.size(); ++i) v[modPositive(static_cast<long long>(i) * j, m_)] += c_[i];
    return fromExponents(m_, std::move(v));
  }

  CycScalar operator-() const {
    CycScalar r = *this;
    for (auto& q : r.c_) q = -q;
    return r;
  }

  friend CycScalar operator+(const CycScalar& a, const CycScalar& b) {
    const int M = std::lcm(a.m_, b.m_);
    CycScalar x = a.promote(M), y = b.promote(M);
    for (std::size_t i = 0; i < x.c_.size(); ++i) x.c_[i] += y.c_[i];
    return x;
  }
  friend CycScalar operator-(const CycScalar& a, const CycScalar& b) { return a + (-b); }

  friend CycScalar operator*(const CycScalar& a, const CycScalar& b) {
    const int M = std::lcm(a.m_, b.m_);
    CycScalar x = a.promote(M), y = b.promote(M);
    std::vector<mpq_class> prod(x.c_.size() + y.c_.size(), 0);
    for (std::size_t i = 0; i < x.c_.size(); ++i) {
      if (x.c_[i] == 0) continue;
      for (std::size_t j = 0; j < y.c_.size(); ++j)
        if (y.c_[j] != 0) prod[i + j] += x.c_[i] * y.c_[j];
    }
    detail::reduceModCyclotomic(prod, M);
    x.c_ = std::move(prod);
    return x;
  }

  /// Inverse through the norm: x^-1 = prod_{j != 1} sigma_j(x) / N(x).
  CycScalar inverse() const {
    if (isZero()) throw PreconditionError("division by zero in Q(zeta_" + std::to_string(m_) + ")");
    CycScalar conjProduct = one(m_);
    for (int j : unitsMod(m_))
      if (j != 1) conjProduct = conjProduct * galois(j);
    CycScalar norm = conjProduct * *this;
    if (!norm.isRational()) throw InternalError("field norm is not rational");
    CycScalar r = conjProduct;
    mpq_class inv = 1 / norm.c_[0];
    for (auto& q : r.c_) q *= inv;
    return r;
  }

  friend CycScalar operator/(const CycScalar& a, const CycScalar& b) { return a * b.inverse(); }

  CycScalar& operator+=(const CycScalar& o) { return *this = *this + o; }
  CycScalar& operator-=(const CycScalar& o) { return *this = *this - o; }
  CycScalar& operator*=(const CycScalar& o) { return *this = *this * o; }

  friend bool operator==(const CycScalar& a, const CycScalar& b) {
    if (a.m_ == b.m_) return a.c_ == b.c_;
    const int M = std::lcm(a.m_, b.m_);
    return a.promote(M).c_ == b.promote(M).c_;
  }
  friend bool operator!=(const CycScalar& a, const CycScalar& b) { return !(a == b); }

  /// Total order on (modulus, coefficients); only meaningful at equal modulus.
  friend bool operator<(const CycScalar& a, const CycScalar& b) {
    if (a.m_ != b.m_) return a.m_ < b.m_;
    return a.c_ < b.c_;
  }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      std::string coef = c_[i].get_str();
      if (!out.empty()) out += coef[0] == '-' ? " - " : " + ";
      else if (coef[0] == '-') out += "-";
      if (coef[0] == '-') coef.erase(0, 1);
      if (i == 0) out += coef;
      else {
        if (coef != "1") out += coef + "*";
        out += "z" + std::to_string(m_);
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out.empty() ? "0" : out;
  }

private:
  int m_;
  std::vector<mpq_class> c_;
};

/// Fixed field Q(zeta_n)^U for a subgroup U of (Z/n)*.
struct SubfieldDescriptor {
  int n = 1;
  std::vector<int> U{1};

  SubfieldDescriptor() = default;
  SubfieldDescriptor(int conductor, const std::vector<int>& generators)
      : n(conductor), U(unitClosure(conductor, generators)) {
    if (conductor <= 0) throw PreconditionError("conductor must be positive");
  }

  /// [k : Q]
  int degree() const { return eulerPhi(n) / static_cast<int>(U.size()); }
  bool isRationals() const { return degree() == 1; }

  /// Membership: x lies in Q(zeta_n) and is fixed by every j in U. Both are
  /// tested at the common modulus by the lifts of U.
  bool contains(const CycScalar& x) const {
    const int L = std::lcm(x.modulus(), n);
    const CycScalar y = x.promote(L);
    for (int j : unitsMod(L)) {
      const int r = n == 1 ? 1 : j % n;
      if (!std::binary_search(U.begin(), U.end(), r)) continue;
      if (y.galois(j) != y) return false;
    }
    return true;
  }

  /// Orbit sums sum_{u in U} zeta_n^{a u}, pruned to a Q-basis of k.
  std::vector<CycScalar> qBasis() const;

  std::string str() const {
    if (isRationals()) return "Q";
    std::string s = "Q(z" + std::to_string(n) + ")";
    if (U.size() > 1) {
      s += "^<";
      for (std::size_t i = 0; i < U.size(); ++i) s += (i ? "," : "") + std::to_string(U[i]);
      s += ">";
    }
    return s;
  }

  bool operator==(const SubfieldDescriptor& o) const { return n == o.n && U == o.U; }
};

}  // namespace gforge

#include "gforge/qlinalg.hpp"

namespace gforge {

inline std::vector<CycScalar> SubfieldDescriptor::qBasis() const {
  std::vector<CycScalar> basis;
  RationalBasis span(eulerPhi(n));
  for (int a = 0; a < n && static_cast<int>(basis.size()) < degree(); ++a) {
    CycScalar sum = CycScalar::zero(n);
    for (int u : U) sum += CycScalar::root(n, static_cast<long long>(a) * u);
    if (span.insert(sum.coeffs())) basis.push_back(sum);
  }
  if (static_cast<int>(basis.size()) != degree()) throw InternalError("orbit sums do not span the fixed field");
  return basis;
}

}  // namespace gforge
