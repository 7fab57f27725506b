#pragma once

#include <algorithm>
#include <array>
#include <utility>
#include <vector>

#include "toridyn/polynomial.hpp"

namespace toridyn {

namespace modp {

// dense polynomials over F_p for small p, lowest degree first
using LVec = std::vector<long>;

inline void normalize(LVec& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

inline int deg(const LVec& v) { return int(v.size()) - 1; }

inline long inv_mod(long a, long p) {
  long t = 0, nt = 1, r = p, nr = a % p;
  if (nr < 0) nr += p;
  while (nr != 0) {
    long q = r / nr;
    long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  check(r == 1, "inv_mod: not invertible");
  return t < 0 ? t + p : t;
}

inline LVec reduce(const IntPoly& f, long p) {
  LVec v(f.c.size());
  for (size_t i = 0; i < f.c.size(); ++i) {
    Int r = f.c[i] % p;
    long x = r.get_si();
    v[i] = x < 0 ? x + p : x;
  }
  normalize(v);
  return v;
}

inline LVec mul(const LVec& a, const LVec& b, long p) {
  if (a.empty() || b.empty()) return {};
  LVec r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
  }
  normalize(r);
  return r;
}

inline LVec sub(LVec a, const LVec& b, long p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
  normalize(a);
  return a;
}

inline std::pair<LVec, LVec> divmod(LVec a, const LVec& b, long p) {
  check(!b.empty(), "modp divmod by zero");
  long inv = inv_mod(b.back(), p);
  if (a.size() < b.size()) return {{}, a};
  LVec q(a.size() - b.size() + 1, 0);
  for (int i = int(a.size()) - 1; i >= int(b.size()) - 1; --i) {
    long c = a[i] % p;
    if (c == 0) continue;
    long f = c * inv % p;
    q[i - (int(b.size()) - 1)] = f;
    for (size_t j = 0; j < b.size(); ++j) {
      size_t k = i - (b.size() - 1) + j;
      a[k] = ((a[k] - f * b[j]) % p + p) % p;
    }
  }
  normalize(a);
  normalize(q);
  return {q, a};
}

inline LVec make_monic(LVec a, long p) {
  if (a.empty()) return a;
  long inv = inv_mod(a.back(), p);
  for (long& c : a) c = c * inv % p;
  return a;
}

inline LVec gcd(LVec a, LVec b, long p) {
  while (!b.empty()) {
    LVec r = divmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

// s*a + t*b = 1 for coprime a, b
inline std::pair<LVec, LVec> bezout(const LVec& a, const LVec& b, long p) {
  LVec r0 = a, r1 = b;
  LVec s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    auto [q, r2] = divmod(r0, r1, p);
    LVec s2 = sub(s0, mul(q, s1, p), p);
    LVec t2 = sub(t0, mul(q, t1, p), p);
    r0 = std::move(r1); r1 = std::move(r2);
    s0 = std::move(s1); s1 = std::move(s2);
    t0 = std::move(t1); t1 = std::move(t2);
  }
  check(deg(r0) == 0, "bezout: inputs not coprime");
  long inv = inv_mod(r0[0], p);
  for (long& c : s0) c = c * inv % p;
  for (long& c : t0) c = c * inv % p;
  return {s0, t0};
}

inline LVec deriv(const LVec& a, long p) {
  if (a.size() <= 1) return {};
  LVec d(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) d[i - 1] = (long)(i % p) * a[i] % p;
  normalize(d);
  return d;
}

inline LVec pow_x_mod(long e, const LVec& f, long p) {
  LVec result{1}, base{0, 1};
  base = divmod(base, f, p).second;
  while (e > 0) {
    if (e & 1) result = divmod(mul(result, base, p), f, p).second;
    base = divmod(mul(base, base, p), f, p).second;
    e >>= 1;
  }
  return result;
}

// Berlekamp factorization of a monic squarefree f over F_p. p small.
inline std::vector<LVec> berlekamp(const LVec& f, long p) {
  int n = deg(f);
  check(n >= 1, "berlekamp: constant input");
  if (n == 1) return {f};

  // rows of B: x^(i*p) mod f
  std::vector<LVec> brow(n);
  brow[0] = LVec{1};
  LVec xp = pow_x_mod(p, f, p);
  LVec cur{1};
  for (int i = 1; i < n; ++i) {
    cur = divmod(mul(cur, xp, p), f, p).second;
    brow[i] = cur;
  }
  // M = B^T - I, right nullspace = Berlekamp subalgebra
  std::vector<std::vector<long>> M(n, std::vector<long>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      long v = (j < int(brow[i].size())) ? brow[i][j] : 0;
      M[j][i] = v;
    }
  }
  for (int i = 0; i < n; ++i) M[i][i] = ((M[i][i] - 1) % p + p) % p;

  // gaussian elimination, track pivot columns
  std::vector<int> pivot_col(n, -1);
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int piv = -1;
    for (int r = rank; r < n; ++r) {
      if (M[r][col] % p != 0) { piv = r; break; }
    }
    if (piv < 0) continue;
    std::swap(M[rank], M[piv]);
    long inv = inv_mod(M[rank][col], p);
    for (int j = 0; j < n; ++j) M[rank][j] = M[rank][j] * inv % p;
    for (int r = 0; r < n; ++r) {
      if (r == rank || M[r][col] == 0) continue;
      long f2 = M[r][col];
      for (int j = 0; j < n; ++j) M[r][j] = ((M[r][j] - f2 * M[rank][j]) % p + p) % p;
    }
    pivot_col[rank++] = col;
  }
  std::vector<LVec> basis;
  std::vector<bool> is_pivot(n, false);
  for (int r = 0; r < rank; ++r) is_pivot[pivot_col[r]] = true;
  for (int col = 0; col < n; ++col) {
    if (is_pivot[col]) continue;
    LVec v(n, 0);
    v[col] = 1;
    for (int r = 0; r < rank; ++r) {
      v[pivot_col[r]] = (p - M[r][col]) % p;
    }
    normalize(v);
    basis.push_back(v);
  }
  size_t nfactors = basis.size();
  check(nfactors >= 1, "berlekamp: empty nullspace");
  std::vector<LVec> factors{f};
  if (nfactors == 1) return factors;
  for (const LVec& v : basis) {
    if (deg(v) <= 0) continue;  // the constants split nothing
    std::vector<LVec> next;
    for (const LVec& h : factors) {
      LVec rem = h;
      bool split_any = false;
      std::vector<LVec> pieces;
      for (long c = 0; c < p && deg(rem) > 0; ++c) {
        LVec shifted = sub(v, LVec{c}, p);
        LVec d = gcd(rem, shifted, p);
        if (deg(d) >= 1 && deg(d) < deg(rem)) {
          pieces.push_back(d);
          rem = divmod(rem, d, p).first;
          split_any = true;
        } else if (deg(d) == deg(rem)) {
          // whole factor; keep going with other c values pointless
          break;
        }
      }
      if (deg(rem) >= 1) pieces.push_back(make_monic(rem, p));
      if (!split_any) {
        next.push_back(h);
      } else {
        for (LVec& q : pieces) next.push_back(make_monic(q, p));
      }
    }
    factors = std::move(next);
    if (factors.size() == nfactors) break;
  }
  check(factors.size() == nfactors, "berlekamp: splitting incomplete");
  return factors;
}

}  // namespace modp

namespace henselian {

// coefficients mod m (kept in [0, m)), lowest first
using MVec = std::vector<Int>;

inline void normalize(MVec& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

inline MVec reduce(const IntPoly& f, const Int& m) {
  MVec v(f.c.size());
  for (size_t i = 0; i < f.c.size(); ++i) {
    mpz_mod(v[i].get_mpz_t(), f.c[i].get_mpz_t(), m.get_mpz_t());
  }
  normalize(v);
  return v;
}

inline MVec from_modp(const modp::LVec& f) {
  MVec v(f.size());
  for (size_t i = 0; i < f.size(); ++i) v[i] = Int((long)f[i]);
  return v;
}

inline MVec mul(const MVec& a, const MVec& b, const Int& m) {
  if (a.empty() || b.empty()) return {};
  MVec r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  for (Int& c : r) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  normalize(r);
  return r;
}

inline MVec add(MVec a, const MVec& b, const Int& m) {
  if (a.size() < b.size()) a.resize(b.size(), Int(0));
  for (size_t i = 0; i < b.size(); ++i) {
    a[i] += b[i];
    mpz_mod(a[i].get_mpz_t(), a[i].get_mpz_t(), m.get_mpz_t());
  }
  normalize(a);
  return a;
}

inline MVec sub(MVec a, const MVec& b, const Int& m) {
  if (a.size() < b.size()) a.resize(b.size(), Int(0));
  for (size_t i = 0; i < b.size(); ++i) {
    a[i] -= b[i];
    mpz_mod(a[i].get_mpz_t(), a[i].get_mpz_t(), m.get_mpz_t());
  }
  normalize(a);
  return a;
}

// division by a monic b
inline std::pair<MVec, MVec> divmod(MVec a, const MVec& b, const Int& m) {
  check(!b.empty() && b.back() == 1, "hensel divmod: divisor not monic");
  if (a.size() < b.size()) return {{}, a};
  MVec q(a.size() - b.size() + 1, Int(0));
  for (int i = int(a.size()) - 1; i >= int(b.size()) - 1; --i) {
    if (a[i] == 0) continue;
    Int f = a[i];
    q[i - (int(b.size()) - 1)] = f;
    for (size_t j = 0; j < b.size(); ++j) {
      size_t k = i - (b.size() - 1) + j;
      a[k] -= f * b[j];
      mpz_mod(a[k].get_mpz_t(), a[k].get_mpz_t(), m.get_mpz_t());
    }
  }
  normalize(a);
  normalize(q);
  return {q, a};
}

inline bool is_monic_of_degree(const MVec& v, int d) {
  return int(v.size()) - 1 == d && !v.empty() && v.back() == 1;
}

struct LiftedPair {
  MVec g, h, s, t;
};

// One quadratic Hensel step: from modulus m to m^2.
// In: f = g*h (mod m), s*g + t*h = 1 (mod m), g and h monic.
inline LiftedPair hensel_step(const MVec& f_mod_m2, const LiftedPair& in, const Int& m) {
  Int m2 = m * m;
  auto up = [&](const MVec& v) {
    MVec r = v;
    normalize(r);
    return r;  // representatives in [0, m) are valid mod m^2
  };
  MVec g = up(in.g), h = up(in.h), s = up(in.s), t = up(in.t);
  MVec e = sub(f_mod_m2, mul(g, h, m2), m2);
  auto [q, r] = divmod(mul(s, e, m2), h, m2);
  MVec gstar = add(add(g, mul(t, e, m2), m2), mul(q, g, m2), m2);
  MVec hstar = add(h, r, m2);
  MVec b = sub(add(mul(s, gstar, m2), mul(t, hstar, m2), m2), MVec{Int(1)}, m2);
  auto [c, d] = divmod(mul(s, b, m2), hstar, m2);
  MVec sstar = sub(s, d, m2);
  MVec tstar = sub(sub(t, mul(t, b, m2), m2), mul(c, gstar, m2), m2);
  check(is_monic_of_degree(gstar, int(in.g.size()) - 1), "hensel: g degree drift");
  check(is_monic_of_degree(hstar, int(in.h.size()) - 1), "hensel: h degree drift");
  check(sub(f_mod_m2, mul(gstar, hstar, m2), m2).empty(), "hensel: product mismatch");
  MVec one_check = sub(add(mul(sstar, gstar, m2), mul(tstar, hstar, m2), m2), MVec{Int(1)}, m2);
  check(one_check.empty(), "hensel: bezout drift");
  return {gstar, hstar, sstar, tstar};
}

// Lift the factorization f = prod(factors) (mod p) to modulus q, where q is
// the first p^(2^k) >= target. All inputs monic. Returns factors mod q.
inline void lift_tree(const MVec& f_mod_q, const std::vector<modp::LVec>& factors, size_t lo,
                      size_t hi, long p, const Int& q, std::vector<MVec>& out) {
  if (hi - lo == 1) {
    out.push_back(f_mod_q);
    return;
  }
  size_t mid = lo + (hi - lo) / 2;
  modp::LVec g0{1}, h0{1};
  for (size_t i = lo; i < mid; ++i) g0 = modp::mul(g0, factors[i], p);
  for (size_t i = mid; i < hi; ++i) h0 = modp::mul(h0, factors[i], p);
  auto [s0, t0] = modp::bezout(g0, h0, p);
  LiftedPair pair{from_modp(g0), from_modp(h0), from_modp(s0), from_modp(t0)};
  Int m((long)p);
  while (m < q) {
    Int m2 = m * m;
    MVec target = f_mod_q;
    for (Int& c : target) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), m2.get_mpz_t());
    normalize(target);
    pair = hensel_step(target, pair, m);
    m = m2;
  }
  check(m == q, "hensel: modulus ladder mismatch");
  lift_tree(pair.g, factors, lo, mid, p, q, out);
  lift_tree(pair.h, factors, mid, hi, p, q, out);
}

inline IntPoly to_symmetric(const MVec& v, const Int& q) {
  Int half = q / 2;
  IntVec c(v.size());
  for (size_t i = 0; i < v.size(); ++i) c[i] = v[i] > half ? Int(v[i] - q) : v[i];
  return IntPoly(std::move(c));
}

}  // namespace henselian

namespace detail {

inline const std::array<long, 40>& factor_primes() {
  static const std::array<long, 40> ps{
      2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,
      47,  53,  59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107,
      109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173};
  return ps;
}

// coefficient bound for monic factors of a monic F (Mignotte style)
inline Int factor_coeff_bound(const IntPoly& F) {
  Int norm2 = 0;
  for (const Int& c : F.c) norm2 += c * c;
  Int root;
  mpz_sqrt(root.get_mpz_t(), norm2.get_mpz_t());
  root += 1;
  Int two_n = 1;
  mpz_mul_2exp(two_n.get_mpz_t(), two_n.get_mpz_t(), F.degree() + 1);
  return two_n * root;
}

// Zassenhaus for a monic squarefree F.
inline std::vector<IntPoly> factor_monic_squarefree(const IntPoly& F) {
  int n = F.degree();
  if (n == 1) return {F};

  long best_p = 0;
  std::vector<modp::LVec> best_factors;
  int tried = 0;
  for (long p : factor_primes()) {
    modp::LVec fp = modp::reduce(F, p);
    if (modp::deg(fp) != n) continue;  // cannot happen for monic F, kept for safety
    modp::LVec d = modp::deriv(fp, p);
    if (d.empty()) continue;
    if (modp::deg(modp::gcd(fp, d, p)) != 0) continue;  // not squarefree mod p
    std::vector<modp::LVec> fac = modp::berlekamp(modp::make_monic(fp, p), p);
    if (fac.size() == 1) return {F};  // irreducible mod p, hence over Q
    if (best_factors.empty() || fac.size() < best_factors.size()) {
      best_p = p;
      best_factors = std::move(fac);
    }
    if (++tried >= 3 || best_factors.size() == 2) break;
  }
  check(!best_factors.empty(), "factor: no usable prime found");

  Int bound = factor_coeff_bound(F);
  Int target = 2 * bound + 1;
  Int q((long)best_p);
  while (q < target) q = q * q;

  std::vector<henselian::MVec> lifted;
  henselian::lift_tree(henselian::reduce(F, q), best_factors, 0, best_factors.size(), best_p, q,
                       lifted);

  // subset recombination
  std::vector<IntPoly> result;
  std::vector<henselian::MVec> pool = lifted;
  IntPoly rest = F;
  bool restart = true;
  while (restart) {
    restart = false;
    size_t m = pool.size();
    if (m == 0) break;
    for (size_t sz = 1; sz <= m / 2 && !restart; ++sz) {
      std::vector<size_t> idx(sz);
      for (size_t i = 0; i < sz; ++i) idx[i] = i;
      while (true) {
        henselian::MVec prod{Int(1)};
        for (size_t i : idx) prod = henselian::mul(prod, pool[i], q);
        IntPoly cand = henselian::to_symmetric(prod, q);
        if (!cand.is_zero() && divides(cand, rest)) {
          result.push_back(cand);
          IntPoly next = exact_div(rest, cand);
          rest = next;
          std::vector<henselian::MVec> np;
          for (size_t i = 0, j = 0; i < pool.size(); ++i) {
            if (j < idx.size() && idx[j] == i) {
              ++j;
              continue;
            }
            np.push_back(pool[i]);
          }
          pool = std::move(np);
          restart = true;
          break;
        }
        // next combination
        int pos = int(sz) - 1;
        while (pos >= 0 && idx[pos] == m - sz + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (size_t i = pos + 1; i < sz; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
  }
  if (rest.degree() >= 1) result.push_back(rest);
  return result;
}

}  // namespace detail

// Irreducible factors (primitive, positive leading coefficient) of a
// squarefree primitive polynomial of degree >= 1.
inline std::vector<IntPoly> factor_squarefree(const IntPoly& f_in) {
  IntPoly f = primitive_part(f_in);
  check(f.degree() >= 1, "factor_squarefree: expected degree >= 1");
  if (f.degree() == 1) return {f};
  Int a = f.lead();
  std::vector<IntPoly> out;
  if (a == 1) {
    out = detail::factor_monic_squarefree(f);
  } else {
    // monicize: F(x) = a^(n-1) f(x/a) has coefficients c_i a^(n-1-i), roots scaled by a
    int n = f.degree();
    IntVec Fc(n + 1);
    Fc[n] = 1;
    Int pw = 1;
    for (int i = n - 1; i >= 0; --i) {
      Fc[i] = f.c[i] * pw;
      pw *= a;
    }
    IntPoly F{IntVec(Fc)};
    check(F.lead() == 1, "factor_squarefree: monicization failed");
    for (const IntPoly& Fi : detail::factor_monic_squarefree(F)) {
      // map back: roots of Fi are a * (roots of the true factor)
      int d = Fi.degree();
      IntVec gc(d + 1);
      Int ap = 1;
      for (int i = 0; i <= d; ++i) {
        gc[i] = Fi.c[i] * ap;
        ap *= a;
      }
      out.push_back(primitive_part(IntPoly{IntVec(gc)}));
    }
  }
  // normalize and sanity check
  IntPoly prod{1};
  for (IntPoly& g : out) {
    g = primitive_part(g);
    prod = prod * g;
  }
  check(prod == f || prod == -Int(1) * f, "factor_squarefree: product check failed");
  return out;
}

// Full factorization: primitive irreducible factors with multiplicities.
inline std::vector<std::pair<IntPoly, int>> factor(const IntPoly& f) {
  check(!f.is_zero(), "factor: zero polynomial");
  std::vector<std::pair<IntPoly, int>> out;
  for (const auto& [g, mult] : squarefree_decomposition(f)) {
    for (const IntPoly& irr : factor_squarefree(g)) out.push_back({irr, mult});
  }
  return out;
}

}  // namespace toridyn
