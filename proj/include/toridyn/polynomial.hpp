#pragma once

#include <algorithm>
#include <functional>
#include <map>

#include "toridyn/matrix.hpp"

namespace toridyn {

// Polynomials store coefficients low-degree first. The zero polynomial is an
// empty vector; degree(0) = -1.
struct IntPoly {
  IntVec c;

  IntPoly() = default;
  explicit IntPoly(IntVec v) : c(std::move(v)) { normalize(); }
  IntPoly(std::initializer_list<int> v) {
    for (int x : v) c.emplace_back(x);
    normalize();
  }

  void normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  int degree() const { return (int)c.size() - 1; }
  bool is_zero() const { return c.empty(); }
  const Int& lead() const {
    check(!c.empty(), "lead of zero polynomial");
    return c.back();
  }
  Int coeff(size_t i) const { return i < c.size() ? c[i] : Int(0); }
  bool operator==(const IntPoly& o) const { return c == o.c; }

  static IntPoly x_power(size_t k) {
    IntVec v(k + 1, 0);
    v[k] = 1;
    return IntPoly(std::move(v));
  }
  static IntPoly constant(Int a) { return IntPoly(IntVec{std::move(a)}); }
};

struct RatPoly {
  RatVec c;

  RatPoly() = default;
  explicit RatPoly(RatVec v) : c(std::move(v)) { normalize(); }
  explicit RatPoly(const IntPoly& p) {
    for (const Int& x : p.c) c.emplace_back(x);
  }
  void normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  int degree() const { return (int)c.size() - 1; }
  bool is_zero() const { return c.empty(); }
  const Rat& lead() const {
    check(!c.empty(), "lead of zero polynomial");
    return c.back();
  }
  Rat coeff(size_t i) const { return i < c.size() ? c[i] : Rat(0); }
  bool operator==(const RatPoly& o) const { return c == o.c; }
};

inline IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  IntVec v(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) v[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) v[i] += b.c[i];
  return IntPoly(std::move(v));
}

inline IntPoly operator-(const IntPoly& a, const IntPoly& b) {
  IntVec v(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) v[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) v[i] -= b.c[i];
  return IntPoly(std::move(v));
}

inline IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return IntPoly();
  IntVec v(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) v[i + j] += a.c[i] * b.c[j];
  }
  return IntPoly(std::move(v));
}

inline IntPoly operator*(const Int& s, const IntPoly& p) {
  IntVec v = p.c;
  for (Int& x : v) x *= s;
  return IntPoly(std::move(v));
}

inline IntPoly operator-(const IntPoly& p) { return Int(-1) * p; }

inline RatPoly operator+(const RatPoly& a, const RatPoly& b) {
  RatVec v(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) v[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) v[i] += b.c[i];
  return RatPoly(std::move(v));
}

inline RatPoly operator-(const RatPoly& a, const RatPoly& b) {
  RatVec v(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) v[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) v[i] -= b.c[i];
  return RatPoly(std::move(v));
}

inline RatPoly operator*(const RatPoly& a, const RatPoly& b) {
  if (a.is_zero() || b.is_zero()) return RatPoly();
  RatVec v(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) v[i + j] += a.c[i] * b.c[j];
  }
  return RatPoly(std::move(v));
}

inline RatPoly operator*(const Rat& s, const RatPoly& p) {
  RatVec v = p.c;
  for (Rat& x : v) x *= s;
  return RatPoly(std::move(v));
}

// Euclidean division over Q.
inline std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
  check(!b.is_zero(), "divmod by zero polynomial");
  RatVec rem = a.c;
  int db = b.degree();
  if (a.degree() < db) return {RatPoly(), a};
  RatVec quo(a.degree() - db + 1, 0);
  for (int i = a.degree(); i >= db; --i) {
    if (rem[i] == 0) continue;
    Rat f = rem[i] / b.lead();
    quo[i - db] = f;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= f * b.c[j];
  }
  return {RatPoly(std::move(quo)), RatPoly(std::move(rem))};
}

// Exact division over Z; throws internal_error if not divisible.
inline IntPoly exact_div(const IntPoly& a, const IntPoly& b) {
  auto [q, r] = divmod(RatPoly(a), RatPoly(b));
  check(r.is_zero(), "exact_div: polynomials do not divide");
  IntVec v(q.c.size());
  for (size_t i = 0; i < q.c.size(); ++i) {
    check(q.c[i].get_den() == 1, "exact_div: quotient not integral");
    v[i] = q.c[i].get_num();
  }
  return IntPoly(std::move(v));
}

inline bool divides(const IntPoly& b, const IntPoly& a) {
  if (b.is_zero()) return a.is_zero();
  auto [q, r] = divmod(RatPoly(a), RatPoly(b));
  if (!r.is_zero()) return false;
  for (const Rat& x : q.c)
    if (x.get_den() != 1) return false;
  return true;
}

inline Int content(const IntPoly& p) { return gcd_all(p.c); }

// Primitive part with positive leading coefficient.
inline IntPoly primitive_part(const IntPoly& p) {
  if (p.is_zero()) return p;
  Int g = content(p);
  if (sign_of(p.lead()) < 0) g = -g;
  IntVec v = p.c;
  for (Int& x : v) x = exact_div(x, g);
  return IntPoly(std::move(v));
}

inline IntPoly clear_denominators(const RatPoly& p) {
  Int den = 1;
  for (const Rat& x : p.c) den = lcm(den, x.get_den());
  IntVec v(p.c.size());
  for (size_t i = 0; i < p.c.size(); ++i) {
    Rat s = p.c[i] * den;
    s.canonicalize();
    v[i] = s.get_num();
  }
  return IntPoly(std::move(v));
}

inline IntPoly derivative(const IntPoly& p) {
  if (p.degree() <= 0) return IntPoly();
  IntVec v(p.c.size() - 1);
  for (size_t i = 1; i < p.c.size(); ++i) v[i - 1] = Int(i) * p.c[i];
  return IntPoly(std::move(v));
}

inline Int eval(const IntPoly& p, const Int& x) {
  Int s = 0;
  for (size_t i = p.c.size(); i-- > 0;) s = s * x + p.c[i];
  return s;
}

inline Rat eval(const IntPoly& p, const Rat& x) {
  Rat s = 0;
  for (size_t i = p.c.size(); i-- > 0;) s = s * x + p.c[i];
  return s;
}

inline Rat eval(const RatPoly& p, const Rat& x) {
  Rat s = 0;
  for (size_t i = p.c.size(); i-- > 0;) s = s * x + p.c[i];
  return s;
}

// gcd over Q, returned as a primitive integer polynomial (positive lead).
inline IntPoly poly_gcd(const IntPoly& a, const IntPoly& b) {
  RatPoly f(a), g(b);
  while (!g.is_zero()) {
    RatPoly r = divmod(f, g).second;
    // Keep coefficients small: primitive integer representative of the same class.
    f = g;
    g = r.is_zero() ? RatPoly() : RatPoly(primitive_part(clear_denominators(r)));
  }
  if (f.is_zero()) return IntPoly();
  return primitive_part(clear_denominators(f));
}

// Yun's squarefree decomposition: returns pairs (factor, multiplicity) with
// factor primitive squarefree, multiplicities distinct and increasing, and
// input = content * sign * prod factor^multiplicity.
inline std::vector<std::pair<IntPoly, int>> squarefree_decomposition(const IntPoly& f0) {
  std::vector<std::pair<IntPoly, int>> out;
  IntPoly f = primitive_part(f0);
  if (f.degree() <= 0) return out;
  IntPoly g = poly_gcd(f, derivative(f));
  IntPoly c = exact_div(f, g);
  IntPoly d = exact_div(derivative(f), g) - derivative(c);
  for (int i = 1; !(c.degree() == 0); ++i) {
    IntPoly p = poly_gcd(c, d);
    if (p.degree() > 0) out.emplace_back(p, i);
    c = exact_div(c, p);
    d = exact_div(d, p) - derivative(c);
  }
  return out;
}

inline IntPoly squarefree_part(const IntPoly& f) {
  IntPoly out = IntPoly::constant(1);
  for (auto& [p, m] : squarefree_decomposition(f)) out = out * p;
  return out;
}

// p(-x)
inline IntPoly negate_variable(const IntPoly& p) {
  IntVec v = p.c;
  for (size_t i = 1; i < v.size(); i += 2) v[i] = -v[i];
  return IntPoly(std::move(v));
}

// x^deg * p(1/x)
inline IntPoly reverse_poly(const IntPoly& p) {
  IntVec v(p.c.rbegin(), p.c.rend());
  return IntPoly(std::move(v));
}

// den^deg * p(num/den * x): integer polynomial whose roots are (den/num) times
// the roots of p. Used to rescale root moduli by an exact rational.
inline IntPoly scale_variable(const IntPoly& p, const Rat& s) {
  Int num = s.get_num(), den = s.get_den();
  check(num != 0, "scale_variable: zero scale");
  int n = p.degree();
  IntVec v(p.c.size());
  Int np = 1;
  for (int i = 0; i <= n; ++i) {
    Int dp = 1;
    for (int k = 0; k < n - i; ++k) dp *= den;
    v[i] = p.c[i] * np * dp;
    np *= num;
  }
  return IntPoly(std::move(v));
}

// p(x^2)
inline IntPoly substitute_square(const IntPoly& p) {
  if (p.is_zero()) return p;
  IntVec v(2 * p.c.size() - 1, 0);
  for (size_t i = 0; i < p.c.size(); ++i) v[2 * i] = p.c[i];
  return IntPoly(std::move(v));
}

// Characteristic polynomial, monic, by the Faddeev-LeVerrier recurrence.
// All divisions are exact over the integers.
inline IntPoly char_poly(const IntMat& M) {
  check(M.rows == M.cols, "char_poly: square required");
  size_t n = M.rows;
  IntVec coeffs(n + 1, 0);
  coeffs[n] = 1;
  IntMat A = M;
  for (size_t k = 1; k <= n; ++k) {
    Int tr = 0;
    for (size_t i = 0; i < n; ++i) tr += A.at(i, i);
    Int ck = -exact_div(tr, Int(k));
    coeffs[n - k] = ck;
    if (k == n) break;
    for (size_t i = 0; i < n; ++i) A.at(i, i) += ck;
    A = M * A;
  }
  return IntPoly(std::move(coeffs));
}

inline RatPoly char_poly(const RatMat& M) {
  check(M.rows == M.cols, "char_poly: square required");
  size_t n = M.rows;
  RatVec coeffs(n + 1, 0);
  coeffs[n] = 1;
  RatMat A = M;
  for (size_t k = 1; k <= n; ++k) {
    Rat tr = 0;
    for (size_t i = 0; i < n; ++i) tr += A.at(i, i);
    Rat ck = -tr / Rat((unsigned long)k);
    coeffs[n - k] = ck;
    if (k == n) break;
    for (size_t i = 0; i < n; ++i) A.at(i, i) += ck;
    A = M * A;
  }
  return RatPoly(std::move(coeffs));
}

// Resultant of two integer polynomials via the Sylvester determinant (Bareiss).
inline Int resultant(const IntPoly& f, const IntPoly& g) {
  if (f.is_zero() || g.is_zero()) return 0;
  int m = f.degree(), n = g.degree();
  if (m == 0 && n == 0) return 1;
  if (m == 0) {
    Int r = 1;
    for (int i = 0; i < n; ++i) r *= f.c[0];
    return r;
  }
  if (n == 0) {
    Int r = 1;
    for (int i = 0; i < m; ++i) r *= g.c[0];
    return r;
  }
  IntMat S(m + n, m + n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) S.at(i, i + j) = f.c[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) S.at(n + i, i + j) = g.c[n - j];
  return det_bareiss(S);
}

// Interpolate the integer polynomial of degree <= deg_bound through the given
// sampler (Newton form over Q, coefficients must come out integral).
inline IntPoly interpolate_integer_poly(int deg_bound,
                                        const std::function<Int(const Int&)>& sample) {
  RatPoly acc;          // interpolant so far
  RatPoly basis;        // prod (x - x_i)
  basis.c = {Rat(1)};
  for (int k = 0; k <= deg_bound; ++k) {
    Int xk = (k % 2 == 0) ? Int(k / 2) : Int(-(k + 1) / 2);  // 0, -1, 1, -2, 2, ...
    Rat x(xk);
    Rat val(sample(xk));
    Rat pred = eval(acc, x);
    Rat bval = eval(basis, x);
    check(bval != 0, "interpolate: repeated node");
    Rat coef = (val - pred) / bval;
    acc = acc + coef * basis;
    RatPoly lin;
    lin.c = {-x, Rat(1)};
    basis = basis * lin;
  }
  IntVec v(acc.c.size());
  for (size_t i = 0; i < acc.c.size(); ++i) {
    check(acc.c[i].get_den() == 1, "interpolate: non-integral coefficient");
    v[i] = acc.c[i].get_num();
  }
  return IntPoly(std::move(v));
}

// Res_x(g(x), x^2 - t*x + 1) as a polynomial in t. Its roots are z + 1/z over
// the roots z of g; non-real roots of g on the unit circle land in (-2, 2).
inline IntPoly joukowski_transform(const IntPoly& g) {
  int n = g.degree();
  check(n >= 0, "joukowski_transform: zero polynomial");
  return interpolate_integer_poly(n, [&](const Int& t) {
    IntPoly q(IntVec{Int(1), -t, Int(1)});
    return resultant(g, q);
  });
}

// Res_x(g(x), x^n * g(T/x)): polynomial of degree n^2 in T whose roots are all
// pairwise products z_i * z_j of roots of g (ordered pairs, including i = j).
// Every squared root modulus |z|^2 of g appears among its real roots.
inline IntPoly pair_product_poly(const IntPoly& g) {
  int n = g.degree();
  check(n >= 1, "pair_product_poly: constant input");
  return interpolate_integer_poly(n * n, [&](const Int& T) {
    IntVec h(n + 1);
    Int tp = 1;
    for (int k = 0; k <= n; ++k) {
      h[n - k] = g.c[k] * tp;  // coefficient of x^{n-k} is a_k T^k
      tp *= T;
    }
    return resultant(g, IntPoly(std::move(h)));
  });
}

// Res_y(m(y), x - y^k): polynomial in x whose roots are the k-th powers of the
// roots of m.
inline IntPoly root_power_poly(const IntPoly& m, unsigned long k) {
  int d = m.degree();
  check(d >= 1 && k >= 1, "root_power_poly: bad arguments");
  return interpolate_integer_poly(d, [&](const Int& x) {
    IntVec q(k + 1, 0);
    q[0] = x;
    q[k] = -1;
    return resultant(m, IntPoly(std::move(q)));
  });
}

// Cyclotomic polynomials by the recursive quotient formula, cached.
inline const IntPoly& cyclotomic(unsigned long n) {
  static std::map<unsigned long, IntPoly> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  IntVec xn(n + 1, 0);
  xn[0] = -1;
  xn[n] = 1;
  IntPoly p(std::move(xn));
  for (unsigned long d = 1; d < n; ++d)
    if (n % d == 0) p = exact_div(p, cyclotomic(d));
  return cache.emplace(n, std::move(p)).first->second;
}

inline unsigned long euler_phi(unsigned long n) {
  unsigned long r = n;
  for (unsigned long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      r -= r / p;
    }
  if (n > 1) r -= r / n;
  return r;
}

// True iff the monic integer polynomial p is x^k times a product of cyclotomic
// polynomials, i.e. every root lies in the closed unit disk (equivalently all
// nonzero roots are roots of unity). Decided by exact cyclotomic trial division.
inline bool kronecker_all_roots_unit(const IntPoly& p0) {
  check(!p0.is_zero(), "kronecker_all_roots_unit: zero polynomial");
  check(p0.lead() == 1, "kronecker_all_roots_unit: input must be monic");
  IntPoly p = p0;
  size_t k = 0;
  while (p.coeff(0) == 0) {
    IntVec v(p.c.begin() + 1, p.c.end());
    p = IntPoly(std::move(v));
    ++k;
  }
  // Divide out each candidate cyclotomic as many times as it appears. phi(d)
  // can only be as large as the remaining degree; d <= 2 * deg^2 + 2 covers
  // every d with phi(d) <= deg since phi(d) >= sqrt(d/2).
  int deg = p.degree();
  unsigned long dmax = 2ul * (unsigned long)deg * (unsigned long)deg + 2;
  for (unsigned long d = 1; d <= dmax && p.degree() > 0; ++d) {
    if (euler_phi(d) > (unsigned long)p.degree()) continue;
    const IntPoly& phi = cyclotomic(d);
    while (p.degree() >= phi.degree() && divides(phi, p)) p = exact_div(p, phi);
  }
  return p.degree() == 0 && p.c[0] == 1;
}

inline std::string to_string(const IntPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (int i = p.degree(); i >= 0; --i) {
    const Int& a = p.c[i];
    if (a == 0) continue;
    if (!s.empty()) s += sign_of(a) > 0 ? " + " : " - ";
    else if (sign_of(a) < 0) s += "-";
    Int m = abs(a);
    bool show_coeff = (m != 1 || i == 0);
    if (show_coeff) s += m.get_str();
    if (i > 0) {
      if (show_coeff) s += "*";
      s += "x";
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s;
}

}  // namespace toridyn
