#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "gforge/cyclo.hpp"
#include "gforge/error.hpp"
#include "gforge/galgebra.hpp"
#include "gforge/presentation.hpp"
#include "gforge/qlinalg.hpp"
#include "gforge/twisted.hpp"

namespace gforge {

/// How the superscript g_i^-1 on u_h and z is read in the diagonal families.
enum class KFormReading {
  Conjugation,  // u_h -> scalar * u_{c h c^-1}, scalars moved by the matching Galois element
  Galois,       // u_h keeps its label, only scalars are moved
};

struct KFormReport {
  int qDim = 0;            // dimension over Q of the closed span
  int kDegree = 1;         // [k : Q]
  int kDim = 0;            // qDim / [k : Q]
  int expectedDim = 0;     // dim_F A
  int fRank = 0;           // rank of the span over the cyclotomic field
  bool closed = false;     // products stay in the span
  bool ok = false;
  std::string construction;
  std::vector<std::string> notes;
};

struct KForm {
  std::vector<AlgElement> generators;
  std::vector<std::string> labels;
  KFormReport report;
};

namespace detail {

/// lambda x_h in a twisted group algebra with mu_n-valued cocycle beta.
struct TwistedMonomial {
  CycScalar scalar;
  int h = 0;
  bool operator==(const TwistedMonomial& o) const { return h == o.h && scalar == o.scalar; }
};

inline TwistedMonomial twistedProduct(const Cocycle& beta, const TwistedMonomial& a, const TwistedMonomial& b) {
  return {a.scalar * b.scalar * CycScalar::root(beta.modulus(), beta.at(a.h, b.h)), beta.lmul(a.h, b.h)};
}

inline TwistedMonomial twistedInverse(const Cocycle& beta, const TwistedMonomial& a) {
  const int inv = beta.linv(a.h);
  return {a.scalar.inverse() * CycScalar::root(beta.modulus(), -beta.at(a.h, inv)), inv};
}

/// Local generators of H, greedily.
inline std::vector<int> localGenerators(const Cocycle& shape) {
  std::vector<int> gens;
  std::vector<char> in(shape.size(), 0);
  in[0] = 1;
  for (int h = 1; h < shape.size(); ++h) {
    if (in[h]) continue;
    gens.push_back(h);
    std::vector<int> reached{0};
    std::fill(in.begin(), in.end(), 0);
    in[0] = 1;
    for (std::size_t q = 0; q < reached.size(); ++q)
      for (int g : gens) {
        const int x = shape.lmul(reached[q], g);
        if (!in[x]) {
          in[x] = 1;
          reached.push_back(x);
        }
      }
  }
  return gens;
}

/// Every homomorphism H -> Z/M, as value vectors on local indices.
inline std::vector<std::vector<long long>> characters(const Cocycle& shape, long long M) {
  const auto gens = localGenerators(shape);
  std::vector<std::vector<long long>> out;
  std::vector<long long> v(gens.size(), 0);
  while (true) {
    std::vector<long long> rho(shape.size(), -1);
    rho[0] = 0;
    std::vector<int> queue{0};
    bool hom = true;
    for (std::size_t q = 0; q < queue.size() && hom; ++q)
      for (std::size_t g = 0; g < gens.size() && hom; ++g) {
        const int x = shape.lmul(queue[q], gens[g]);
        const long long val = (rho[queue[q]] + v[g]) % M;
        if (rho[x] < 0) {
          rho[x] = val;
          queue.push_back(x);
        } else if (rho[x] != val) {
          hom = false;
        }
      }
    if (hom) {
      for (int a = 0; a < shape.size() && hom; ++a)
        for (int b = 0; b < shape.size() && hom; ++b)
          if ((rho[a] + rho[b]) % M != rho[shape.lmul(a, b)]) hom = false;
      if (hom) out.push_back(rho);
    }
    std::size_t pos = 0;
    while (pos < v.size() && ++v[pos] == M) v[pos++] = 0;
    if (pos == v.size()) break;
  }
  return out;
}

/// Cocycle with values in mu_n cohomologous to alpha, with the change of
/// basis x_h = zeta_M^f(h) u_h that realizes it.
struct MuNForm {
  Cocycle beta;
  std::vector<long long> f;
  long long M = 1;
};

inline MuNForm muNForm(const Cocycle& alpha, int n, const Caps& caps) {
  const int m = alpha.modulus();
  MuNForm out;
  out.f.assign(alpha.size(), 0);
  if (m % n == 0 && std::all_of(alpha.exps().begin(), alpha.exps().end(), [&](int x) { return x % (m / n) == 0; })) {
    std::vector<int> e;
    for (int x : alpha.exps()) e.push_back(x / (m / n));
    out.beta = Cocycle(alpha.subgroup(), n, std::move(e));
    return out;
  }
  for (const auto& rep : h2Classes(alpha.subgroup(), n, caps)) {
    const int ext = alpha.subgroup().group().restrictTo(alpha.subgroup().elements()).exponent();
    if (auto f = isCohomologous(alpha, rep, ext)) {
      out.beta = rep;
      out.f = *f;
      out.M = static_cast<long long>(std::lcm(m, n)) * ext;
      return out;
    }
  }
  throw InternalError("no mu_n-valued cocycle is cohomologous to alpha");
}

/// Q-coordinates of an element: phi(L) rationals per basis index.
inline std::vector<mpq_class> qCoordinates(const AlgElement& x, int L) {
  const int phi = eulerPhi(L);
  std::vector<mpq_class> v(x.algebra().dim() * phi);
  for (const auto& [idx, c] : x.terms()) {
    const auto coords = c.promote(L).coeffs();
    for (int k = 0; k < phi; ++k) v[idx * phi + k] = coords[k];
  }
  return v;
}

inline int commonModulus(const std::vector<AlgElement>& xs) {
  int L = 1;
  for (const auto& x : xs)
    for (const auto& [idx, c] : x.terms()) L = std::lcm(L, c.modulus());
  return L;
}

/// Rank over Q(zeta_L) of elements written in the algebra basis.
inline int cyclotomicRank(const std::vector<AlgElement>& xs, std::size_t dim) {
  std::vector<std::map<std::size_t, CycScalar>> rows;
  for (const auto& x : xs) rows.push_back(x.terms());
  int rank = 0;
  for (std::size_t col = 0; col < dim && !rows.empty(); ++col) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const auto& r) { return r.count(col) > 0; });
    if (it == rows.end()) continue;
    auto pivot = std::move(*it);
    rows.erase(it);
    const CycScalar inv = pivot.at(col).inverse();
    for (auto& r : rows) {
      auto c = r.find(col);
      if (c == r.end()) continue;
      const CycScalar f = c->second * inv;
      for (const auto& [k, v] : pivot) {
        auto [slot, fresh] = r.emplace(k, -(f * v));
        if (!fresh) slot->second -= f * v;
        if (slot->second.isZero()) r.erase(slot);
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Closes the k-span of the generators under multiplication and records
/// dimensions; kappa ranges over a Q-basis of k.
inline KFormReport verifyKForm(const GradedAlgebra& A, const std::vector<AlgElement>& generators, const SubfieldDescriptor& k) {
  KFormReport r;
  r.expectedDim = static_cast<int>(A.dim());
  r.kDegree = k.degree();
  std::vector<AlgElement> seeds;
  for (const auto& b : k.qBasis())
    for (const auto& g : generators) seeds.push_back(b * g);
  seeds.push_back(AlgElement::identity(A));
  const int L = std::lcm(detail::commonModulus(seeds), A.scalarModulus());
  std::vector<AlgElement> basis;
  auto tryInsert = [&](RationalBasis& span, const AlgElement& x) {
    if (x.isZero()) return false;
    if (span.insert(detail::qCoordinates(x, L))) {
      basis.push_back(x);
      return true;
    }
    return false;
  };
  RationalBasis span(A.dim() * eulerPhi(L));
  for (const auto& s : seeds) tryInsert(span, s);
  const std::size_t limit = static_cast<std::size_t>(A.dim()) * eulerPhi(L);
  std::size_t done = 0;
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t size = basis.size();
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = (i < done ? done : 0); j < size; ++j) {
        auto prod = basis[i] * basis[j];
        if (tryInsert(span, prod)) grew = true;
        if (basis.size() > limit) throw InternalError("span exceeds the ambient dimension");
      }
    done = size;
  }
  r.closed = true;
  r.qDim = static_cast<int>(basis.size());
  r.kDim = r.qDim % r.kDegree == 0 ? r.qDim / r.kDegree : -1;
  r.fRank = detail::cyclotomicRank(basis, A.dim());
  r.ok = r.closed && r.kDim == r.expectedDim && r.fRank == r.expectedDim;
  return r;
}

/// Generators of a k-form of A. Two shapes are supported: the image of S in
/// (Z/n)* is trivial (k = Q(zeta_n)), or S/H is cyclic of order |image| with
/// the tuple listing the powers c^0, ..., c^{m-1} of a generator c.
inline KForm buildKForm(const GradedAlgebra& A, KFormReading reading = KFormReading::Conjugation, int L = 4,
                        const Caps& caps = defaultCaps()) {
  const Presentation& P = A.presentation();
  const Group& G = P.group();
  const InvariantChain chain = computeKNS(P, L);
  const int n = chain.n;
  const detail::MuNForm form = detail::muNForm(P.alpha, n, caps);
  const Cocycle& beta = form.beta;
  auto xScalar = [&](int h) {
    return form.f[h] == 0 ? CycScalar::one() : CycScalar::root(static_cast<int>(form.M), form.f[h]);
  };
  KForm out;
  auto add = [&](AlgElement x, std::string label) {
    out.generators.push_back(std::move(x));
    out.labels.push_back(std::move(label));
  };

  if (chain.sBarImage.size() == 1) {
    for (int h = 1; h < P.H.order(); ++h)
      add(AlgElement::basis(A, A.index(h, 0, 0), xScalar(h)), "x_" + G.name(P.H.elements()[h]) + "(x)e1,1");
    for (int i = 0; i < A.n(); ++i)
      for (int j = 0; j < A.n(); ++j)
        add(AlgElement::basis(A, A.index(0, i, j)), "e" + std::to_string(i + 1) + "," + std::to_string(j + 1));
    out.report = verifyKForm(A, out.generators, chain.k);
    out.report.construction = "split";
    return out;
  }

  // cyclic descent along S/H = <cH>
  const int m = static_cast<int>(chain.sBarImage.size());
  if (A.n() != m) throw PreconditionError("k-form needs the tuple to be one S-orbit of length |S-bar|");
  std::optional<Elem> gen;
  for (Elem c : chain.S) {
    Elem pw = 0;
    bool match = true;
    for (int i = 0; i < m && match; ++i) {
      match = P.tuple[i] == pw;
      pw = G.mul(pw, c);
    }
    if (!match || !P.H.contains(pw)) continue;
    if (unitClosure(n, {chain.action.at(c)}).size() != static_cast<std::size_t>(m)) continue;
    gen = c;
    break;
  }
  if (!gen) throw PreconditionError("presentation is not in S-factored form: the tuple is not (e, c, ..., c^(m-1))");
  const Elem c = *gen;
  Elem cm = 0;
  for (int i = 0; i < m; ++i) cm = G.mul(cm, c);
  const int h0 = P.H.localIndex(cm);
  const int gamma = static_cast<int>(inverseMod(chain.action.at(c), n));

  // conjugation reading relabels u_h -> u_{c h c^-1}; the Galois reading does not
  std::vector<int> relabel(P.H.order());
  for (int h = 0; h < P.H.order(); ++h)
    relabel[h] = reading == KFormReading::Conjugation ? P.H.localIndex(G.conj(c, P.H.elements()[h])) : h;
  std::vector<int> shiftedExps(static_cast<std::size_t>(beta.size()) * beta.size());
  for (int a = 0; a < beta.size(); ++a)
    for (int b = 0; b < beta.size(); ++b) shiftedExps[a * beta.size() + b] = beta.at(relabel[a], relabel[b]);
  const Cocycle shifted(beta.subgroup(), beta.modulus(), std::move(shiftedExps));
  const Cocycle twisted = galoisCocycle(beta, gamma);
  const int ext = P.H.group().restrictTo(P.H.elements()).exponent();
  // twisted - shifted = delta mu is what makes psi multiplicative
  auto f = isCohomologous(shifted, twisted, ext);
  if (!f) {
    out.report.construction = "cyclic";
    out.report.notes.push_back("no semilinear lift of the superscript: the two cocycles are not cohomologous");
    out.report.expectedDim = static_cast<int>(A.dim());
    return out;
  }
  const long long M = static_cast<long long>(n) * ext;
  auto psiWith = [&](const std::vector<long long>& mu) {
    return [&, mu](const detail::TwistedMonomial& x) {
      return detail::TwistedMonomial{x.scalar.galois(gamma) * CycScalar::root(static_cast<int>(M), mu[x.h]), relabel[x.h]};
    };
  };
  std::optional<std::vector<long long>> mu;
  for (const auto& rho : detail::characters(beta, M)) {
    std::vector<long long> cand(P.H.order());
    bool inMuN = true;
    for (int h = 0; h < P.H.order(); ++h) {
      cand[h] = ((*f)[h] + rho[h]) % M;
      if (cand[h] % (M / n) != 0) inMuN = false;
    }
    if (!inMuN) continue;
    auto psi = psiWith(cand);
    const detail::TwistedMonomial u0{CycScalar::one(), h0};
    const auto u0inv = detail::twistedInverse(beta, u0);
    bool inner = true;
    for (int h = 0; h < P.H.order() && inner; ++h) {
      detail::TwistedMonomial x{CycScalar::one(), h};
      for (int r = 0; r < m; ++r) x = psi(x);
      auto ad = detail::twistedProduct(beta, detail::twistedProduct(beta, u0, {CycScalar::one(), h}), u0inv);
      inner = x == ad;
    }
    if (inner) {
      mu = cand;
      break;
    }
  }
  if (!mu) {
    out.report.construction = "cyclic";
    out.report.notes.push_back("no correction makes the m-th power of the semilinear map inner");
    out.report.expectedDim = static_cast<int>(A.dim());
    return out;
  }
  for (auto& v : *mu) v /= M / n;  // now exponents of zeta_n
  auto psi = [&](const detail::TwistedMonomial& x) {
    return detail::TwistedMonomial{x.scalar.galois(gamma) * CycScalar::root(n, (*mu)[x.h]), relabel[x.h]};
  };
  auto embed = [&](const detail::TwistedMonomial& x, int i, int j) {
    return AlgElement::basis(A, A.index(x.h, i, j), x.scalar * xScalar(x.h));
  };
  auto diagonal = [&](detail::TwistedMonomial x) {
    AlgElement d(A);
    for (int i = 0; i < m; ++i) {
      d += embed(x, i, i);
      x = psi(x);
    }
    return d;
  };
  for (int h = 1; h < P.H.order(); ++h)
    add(diagonal({CycScalar::one(), h}), "D(x_" + G.name(P.H.elements()[h]) + ")");
  if (n > 2) add(diagonal({CycScalar::root(n, 1), 0}), "D(z" + std::to_string(n) + ")");

  // Hilbert 90: lambda with gamma(lambda) = mu(h0) lambda
  const CycScalar a = CycScalar::root(n, -(*mu)[h0]);
  std::optional<CycScalar> lambda;
  for (int t = 0; t < std::max(n, 2) && !lambda; ++t) {
    const CycScalar theta = CycScalar::root(n, t);
    CycScalar sum = CycScalar::zero(n), coef = CycScalar::one(n), th = theta;
    CycScalar ai = a;
    for (int i = 0; i < m; ++i) {
      sum += coef * th;
      coef = coef * ai;
      ai = ai.galois(gamma);
      th = th.galois(gamma);
    }
    if (!sum.isZero()) lambda = sum;
  }
  if (!lambda) throw InternalError("Hilbert 90 produced no nonzero solution");
  AlgElement perm(A);
  for (int i = 0; i + 1 < m; ++i) perm += AlgElement::basis(A, A.index(0, i + 1, i));
  auto corner = detail::twistedInverse(beta, {CycScalar::one(), h0});
  corner.scalar = corner.scalar * *lambda;
  perm += embed(corner, 0, m - 1);
  add(perm, "P");

  out.report = verifyKForm(A, out.generators, chain.k);
  out.report.construction = reading == KFormReading::Conjugation ? "cyclic" : "cyclic-galois";
  return out;
}

}  // namespace gforge
