#pragma once

#include <optional>

#include "toridyn/arith.hpp"

namespace toridyn {

// Dense row-major matrices. Sizes here are tiny (lattice rank <= ~12), so the
// plain-vector representation and O(n^3) exact algorithms are the right tool.
template <typename T>
struct Mat {
  size_t rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}
  Mat(size_t r, size_t c, std::vector<T> entries) : rows(r), cols(c), a(std::move(entries)) {
    check(a.size() == rows * cols, "Mat: entry count mismatch");
  }

  T& at(size_t i, size_t j) { return a[i * cols + j]; }
  const T& at(size_t i, size_t j) const { return a[i * cols + j]; }

  static Mat identity(size_t n) {
    Mat m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

  std::vector<T> row(size_t i) const {
    return std::vector<T>(a.begin() + i * cols, a.begin() + (i + 1) * cols);
  }
  std::vector<T> col(size_t j) const {
    std::vector<T> out;
    out.reserve(rows);
    for (size_t i = 0; i < rows; ++i) out.push_back(at(i, j));
    return out;
  }

  Mat transpose() const {
    Mat t(cols, rows);
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
  }
};

using IntMat = Mat<Int>;
using RatMat = Mat<Rat>;

template <typename T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y) {
  check(x.cols == y.rows, "matrix product: shape mismatch");
  Mat<T> z(x.rows, y.cols);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t k = 0; k < x.cols; ++k) {
      const T& v = x.at(i, k);
      if (v == 0) continue;
      for (size_t j = 0; j < y.cols; ++j) z.at(i, j) += v * y.at(k, j);
    }
  return z;
}

template <typename T>
std::vector<T> operator*(const Mat<T>& m, const std::vector<T>& v) {
  check(m.cols == v.size(), "matrix-vector product: shape mismatch");
  std::vector<T> out(m.rows);
  for (size_t i = 0; i < m.rows; ++i) {
    T s = 0;
    for (size_t j = 0; j < m.cols; ++j) s += m.at(i, j) * v[j];
    out[i] = std::move(s);
  }
  return out;
}

template <typename T>
Mat<T> operator-(const Mat<T>& x, const Mat<T>& y) {
  check(x.rows == y.rows && x.cols == y.cols, "matrix difference: shape mismatch");
  Mat<T> z(x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); ++i) z.a[i] = x.a[i] - y.a[i];
  return z;
}

template <typename T>
Mat<T> mat_pow(Mat<T> m, unsigned long e) {
  check(m.rows == m.cols, "mat_pow: square required");
  Mat<T> acc = Mat<T>::identity(m.rows);
  while (e) {
    if (e & 1) acc = acc * m;
    e >>= 1;
    if (e) m = m * m;
  }
  return acc;
}

inline RatMat to_rat(const IntMat& m) {
  RatMat r(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = Rat(m.a[i]);
  return r;
}

// Least common denominator over all entries, and the scaled integer matrix.
inline Int common_denominator(const RatMat& m) {
  Int d = 1;
  for (const Rat& x : m.a) d = lcm(d, x.get_den());
  return d;
}

inline IntMat scaled_integer(const RatMat& m, const Int& d) {
  IntMat out(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i) {
    Rat s = m.a[i] * d;
    s.canonicalize();
    check(s.get_den() == 1, "scaled_integer: scale does not clear denominators");
    out.a[i] = s.get_num();
  }
  return out;
}

// Fraction-free Gaussian elimination (Bareiss). Exact over Z, O(n^3) with
// single-step exact divisions; also the workhorse for integer determinants.
inline Int det_bareiss(IntMat m) {
  check(m.rows == m.cols, "det: square required");
  size_t n = m.rows;
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m.at(k, k) == 0) {
      size_t p = k + 1;
      while (p < n && m.at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (size_t j = 0; j < n; ++j) swap(m.at(k, j), m.at(p, j));
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        m.at(i, j) = exact_div(m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j), prev);
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : -m.at(n - 1, n - 1);
}

inline Rat det(const RatMat& m) {
  Int d = common_denominator(m);
  Int di = det_bareiss(scaled_integer(m, d));
  Rat scale(d);
  Rat p = 1;
  for (size_t i = 0; i < m.rows; ++i) p *= scale;
  return Rat(di) / p;
}

inline Int det(const IntMat& m) { return det_bareiss(m); }

// Gauss-Jordan inverse over Q. Throws input_error on singular input.
inline RatMat inverse(const RatMat& m) {
  check(m.rows == m.cols, "inverse: square required");
  size_t n = m.rows;
  RatMat w = m;
  RatMat inv = RatMat::identity(n);
  for (size_t k = 0; k < n; ++k) {
    size_t p = k;
    while (p < n && w.at(p, k) == 0) ++p;
    if (p == n) throw input_error("matrix not invertible");
    if (p != k)
      for (size_t j = 0; j < n; ++j) {
        swap(w.at(k, j), w.at(p, j));
        swap(inv.at(k, j), inv.at(p, j));
      }
    Rat piv = w.at(k, k);
    for (size_t j = 0; j < n; ++j) {
      w.at(k, j) /= piv;
      inv.at(k, j) /= piv;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == k || w.at(i, k) == 0) continue;
      Rat f = w.at(i, k);
      for (size_t j = 0; j < n; ++j) {
        w.at(i, j) -= f * w.at(k, j);
        inv.at(i, j) -= f * inv.at(k, j);
      }
    }
  }
  return inv;
}

inline RatMat inverse(const IntMat& m) { return inverse(to_rat(m)); }

// Rank over Q by elimination.
inline size_t rank(const RatMat& m) {
  RatMat w = m;
  size_t r = 0;
  for (size_t c = 0; c < w.cols && r < w.rows; ++c) {
    size_t p = r;
    while (p < w.rows && w.at(p, c) == 0) ++p;
    if (p == w.rows) continue;
    if (p != r)
      for (size_t j = 0; j < w.cols; ++j) swap(w.at(r, j), w.at(p, j));
    for (size_t i = r + 1; i < w.rows; ++i) {
      if (w.at(i, c) == 0) continue;
      Rat f = w.at(i, c) / w.at(r, c);
      for (size_t j = c; j < w.cols; ++j) w.at(i, j) -= f * w.at(r, j);
    }
    ++r;
  }
  return r;
}

inline size_t rank(const IntMat& m) { return rank(to_rat(m)); }

// Unique solution of a square nonsingular rational system A x = b.
inline RatVec solve(const RatMat& A, const RatVec& b) {
  check(A.rows == A.cols && A.rows == b.size(), "solve: shape mismatch");
  return inverse(A) * b;
}

// Some solution of A x = b for arbitrary A (free variables set to 0), or
// nothing when the system is inconsistent.
inline std::optional<RatVec> try_solve(const RatMat& A, const RatVec& b) {
  check(A.rows == b.size(), "try_solve: shape mismatch");
  size_t r = A.rows, c = A.cols;
  RatMat m(r, c + 1);
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < c; ++j) m.at(i, j) = A.at(i, j);
    m.at(i, c) = b[i];
  }
  std::vector<size_t> pivot_col;
  size_t row = 0;
  for (size_t col = 0; col < c && row < r; ++col) {
    size_t p = row;
    while (p < r && m.at(p, col) == 0) ++p;
    if (p == r) continue;
    for (size_t j = 0; j <= c; ++j) std::swap(m.at(row, j), m.at(p, j));
    Rat inv = 1 / m.at(row, col);
    for (size_t j = col; j <= c; ++j) m.at(row, j) *= inv;
    for (size_t i = 0; i < r; ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      Rat f = m.at(i, col);
      for (size_t j = col; j <= c; ++j) m.at(i, j) -= f * m.at(row, j);
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (size_t i = row; i < r; ++i)
    if (m.at(i, c) != 0) return std::nullopt;
  RatVec x(c, Rat(0));
  for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = m.at(i, c);
  return x;
}

inline bool is_identity(const RatMat& m) {
  if (m.rows != m.cols) return false;
  for (size_t i = 0; i < m.rows; ++i)
    for (size_t j = 0; j < m.cols; ++j)
      if (m.at(i, j) != Rat(i == j ? 1 : 0)) return false;
  return true;
}

inline bool is_identity(const IntMat& m) {
  if (m.rows != m.cols) return false;
  for (size_t i = 0; i < m.rows; ++i)
    for (size_t j = 0; j < m.cols; ++j)
      if (m.at(i, j) != Int(i == j ? 1 : 0)) return false;
  return true;
}

// Coefficients of det(xI - M), index i = coefficient of x^i, leading 1.
// Faddeev-LeVerrier; the interior divisions are exact over Z.
inline IntVec char_poly_coeffs(const IntMat& m) {
  check(m.rows == m.cols, "char_poly_coeffs: square required");
  size_t n = m.rows;
  IntVec c(n + 1);
  c[n] = 1;
  IntMat w = IntMat::identity(n);
  for (size_t k = 1; k <= n; ++k) {
    w = m * w;
    Int tr = 0;
    for (size_t i = 0; i < n; ++i) tr += w.at(i, i);
    Int ck = -tr;
    check(mpz_divisible_ui_p(ck.get_mpz_t(), static_cast<unsigned long>(k)),
          "char_poly_coeffs: non-exact division");
    mpz_divexact_ui(ck.get_mpz_t(), ck.get_mpz_t(), static_cast<unsigned long>(k));
    c[n - k] = ck;
    for (size_t i = 0; i < n; ++i) w.at(i, i) += ck;
  }
  return c;
}

}  // namespace toridyn
