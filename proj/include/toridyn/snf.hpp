#pragma once

#include "toridyn/matrix.hpp"

namespace toridyn {

// Smith normal form U*A*V = D with U, V unimodular, D diagonal with
// nonnegative invariant factors d_1 | d_2 | ... .
struct SmithForm {
  IntMat U, D, V;
};

inline SmithForm smith_normal_form(const IntMat& A) {
  size_t n = A.rows, m = A.cols;
  IntMat D = A;
  IntMat U = IntMat::identity(n);
  IntMat V = IntMat::identity(m);

  auto swap_rows = [&](size_t i, size_t j) {
    for (size_t c = 0; c < m; ++c) swap(D.at(i, c), D.at(j, c));
    for (size_t c = 0; c < n; ++c) swap(U.at(i, c), U.at(j, c));
  };
  auto swap_cols = [&](size_t i, size_t j) {
    for (size_t r = 0; r < n; ++r) swap(D.at(r, i), D.at(r, j));
    for (size_t r = 0; r < m; ++r) swap(V.at(r, i), V.at(r, j));
  };
  auto add_row = [&](size_t dst, size_t src, const Int& f) {  // row dst += f * row src
    for (size_t c = 0; c < m; ++c) D.at(dst, c) += f * D.at(src, c);
    for (size_t c = 0; c < n; ++c) U.at(dst, c) += f * U.at(src, c);
  };
  auto add_col = [&](size_t dst, size_t src, const Int& f) {
    for (size_t r = 0; r < n; ++r) D.at(r, dst) += f * D.at(r, src);
    for (size_t r = 0; r < m; ++r) V.at(r, dst) += f * V.at(r, src);
  };
  auto negate_row = [&](size_t i) {
    for (size_t c = 0; c < m; ++c) D.at(i, c) = -D.at(i, c);
    for (size_t c = 0; c < n; ++c) U.at(i, c) = -U.at(i, c);
  };

  size_t t = 0;
  while (t < n && t < m) {
    // Find the nonzero entry of smallest absolute value in the remaining block.
    size_t pi = t, pj = t;
    bool found = false;
    Int best = 0;
    for (size_t i = t; i < n; ++i)
      for (size_t j = t; j < m; ++j) {
        const Int& x = D.at(i, j);
        if (x == 0) continue;
        Int ax = abs(x);
        if (!found || ax < best) {
          found = true;
          best = ax;
          pi = i;
          pj = j;
        }
      }
    if (!found) break;
    if (pi != t) swap_rows(t, pi);
    if (pj != t) swap_cols(t, pj);
    if (D.at(t, t) < 0) negate_row(t);

    bool clean = true;
    for (size_t i = t + 1; i < n; ++i) {
      if (D.at(i, t) == 0) continue;
      Int q = D.at(i, t) / D.at(t, t);  // truncated; remainder handled next sweep
      if (q != 0) add_row(i, t, -q);
      if (D.at(i, t) != 0) clean = false;
    }
    for (size_t j = t + 1; j < m; ++j) {
      if (D.at(t, j) == 0) continue;
      Int q = D.at(t, j) / D.at(t, t);
      if (q != 0) add_col(j, t, -q);
      if (D.at(t, j) != 0) clean = false;
    }
    if (!clean) continue;  // smaller residues appeared; pick a new pivot

    // Pivot must divide everything below-right so invariant factors nest; if
    // not, fold the offending row in and retry.
    bool divides_all = true;
    for (size_t i = t + 1; i < n && divides_all; ++i)
      for (size_t j = t + 1; j < m && divides_all; ++j)
        if (D.at(i, j) % D.at(t, t) != 0) {
          add_row(t, i, 1);
          divides_all = false;
        }
    if (!divides_all) continue;
    ++t;
  }
  return {U, D, V};
}

// Saturated integer basis of ker(A : Z^cols -> Z^rows), as rows of the result.
inline IntMat kernel_basis(const IntMat& A) {
  SmithForm s = smith_normal_form(A);
  size_t r = 0;
  while (r < s.D.rows && r < s.D.cols && s.D.at(r, r) != 0) ++r;
  IntMat out(A.cols - r, A.cols);
  for (size_t k = r; k < A.cols; ++k)
    for (size_t i = 0; i < A.cols; ++i) out.at(k - r, i) = s.V.at(i, k);
  return out;
}

inline IntMat int_transpose(const IntMat& m) { return m.transpose(); }

// Exact integer inverse of a unimodular matrix.
inline IntMat unimodular_inverse(const IntMat& m) {
  RatMat inv = inverse(to_rat(m));
  IntMat out(inv.rows, inv.cols);
  for (size_t i = 0; i < inv.a.size(); ++i) {
    check(inv.a[i].get_den() == 1, "unimodular_inverse: input not unimodular");
    out.a[i] = inv.a[i].get_num();
  }
  return out;
}

// Quotient of Z^n by the saturation of the row span of B (k x n, rank k).
// Returns the projection pi ((n-k) x n, surjective) and an integer section S
// (n x (n-k)) with pi*S = I. ker_Z(pi) is exactly the saturated row span.
struct LatticeQuotient {
  IntMat pi;
  IntMat section;
};

inline LatticeQuotient quotient_by_rowspan(const IntMat& B, size_t ambient) {
  check(B.cols == ambient, "quotient_by_rowspan: shape mismatch");
  SmithForm s = smith_normal_form(B.transpose());  // U * B^T * V = D, D is n x k
  size_t r = 0;
  while (r < s.D.rows && r < s.D.cols && s.D.at(r, r) != 0) ++r;
  check(r == B.rows, "quotient_by_rowspan: generators not independent");
  IntMat Uinv = unimodular_inverse(s.U);
  size_t q = ambient - r;
  IntMat pi(q, ambient), sec(ambient, q);
  for (size_t i = 0; i < q; ++i)
    for (size_t j = 0; j < ambient; ++j) pi.at(i, j) = s.U.at(r + i, j);
  for (size_t i = 0; i < ambient; ++i)
    for (size_t j = 0; j < q; ++j) sec.at(i, j) = Uinv.at(i, r + j);
  return {pi, sec};
}

// Saturation of the row span of B inside Z^n: rows form a basis of
// span_Q(rows of B) intersected with Z^n.
inline IntMat saturate_rowspan(const IntMat& B) {
  SmithForm s = smith_normal_form(B.transpose());
  size_t r = 0;
  while (r < s.D.rows && r < s.D.cols && s.D.at(r, r) != 0) ++r;
  IntMat Uinv = unimodular_inverse(s.U);
  // Columns 0..r-1 of U^-1 span the saturation (invariant factors divided out).
  IntMat out(r, B.cols);
  for (size_t k = 0; k < r; ++k)
    for (size_t i = 0; i < B.cols; ++i) out.at(k, i) = Uinv.at(i, k);
  return out;
}

// Integer right inverse of a surjective integer map pi : Z^n -> Z^q.
inline IntMat right_inverse(const IntMat& pi) {
  SmithForm s = smith_normal_form(pi);
  size_t q = pi.rows, n = pi.cols;
  check(q <= n, "right_inverse: not surjective");
  for (size_t i = 0; i < q; ++i)
    check(s.D.at(i, i) == 1, "right_inverse: map not surjective over Z");
  // pi = U^-1 [I 0] V^-1, so S = V [I;0] U satisfies pi S = I.
  IntMat sel(n, q);
  for (size_t i = 0; i < q; ++i) sel.at(i, i) = 1;
  return s.V * sel * s.U;
}

}  // namespace toridyn
