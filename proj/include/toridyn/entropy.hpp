#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "toridyn/algebraic.hpp"
#include "toridyn/diskcount.hpp"

namespace toridyn {

// Kronecker: a primitive integer polynomial has all roots on the unit circle
// iff it is monic up to sign, has constant term +-1, and all roots lie in the
// closed disk. Such roots are exactly roots of unity.
inline bool all_roots_roots_of_unity(const IntPoly& p) {
  check(!p.is_zero(), "all_roots_roots_of_unity: zero polynomial");
  int n = p.degree();
  if (n == 0) return true;  // no roots
  if (abs(p.lead()) != 1 || abs(p.coeff(0)) != 1) return false;
  return count_roots_in_closed_unit_disk(p) == n;
}

namespace detail {

inline unsigned long euler_phi(unsigned long m) {
  unsigned long result = m;
  for (unsigned long q = 2; q * q <= m; ++q) {
    if (m % q) continue;
    result -= result / q;
    while (m % q == 0) m /= q;
  }
  if (m > 1) result -= result / m;
  return result;
}

// lcm of all possible orders of finite-order elements of GL_r(Q): an order m
// element needs each cyclotomic factor of its minimal polynomial to fit in
// dimension r, so phi(m_i) <= r and m = lcm(m_i) divides this.
inline unsigned long finite_order_exponent(int r) {
  check(r >= 1, "finite_order_exponent: positive rank required");
  Int l = 1;
  // phi(m) >= sqrt(m/2), so phi(m) <= r forces m <= 2r^2 + 1
  for (unsigned long m = 1; m <= 2ul * r * r + 1; ++m)
    if (euler_phi(m) <= static_cast<unsigned long>(r)) l = lcm(l, Int(m));
  check(l.fits_ulong_p(), "finite_order_exponent: exponent overflow");
  return l.get_ui();
}

}  // namespace detail

// Exact finite-order test for a rational matrix: eigenvalues must all be
// roots of unity (else some power diverges), and then the order divides the
// rank-r exponent bound, so one power comparison decides.
inline bool finite_order(const RatMat& M) {
  check(M.rows == M.cols, "finite_order: square required");
  size_t r = M.rows;
  if (r == 0) return true;
  Int s = common_denominator(M);
  IntPoly cp = scale_variable(char_poly(scaled_integer(M, s)), Rat(s));
  if (!all_roots_roots_of_unity(cp)) return false;
  return mat_pow(M, detail::finite_order_exponent(static_cast<int>(r))) ==
         to_rat(IntMat::identity(r));
}

inline bool finite_order(const IntMat& M) { return finite_order(to_rat(M)); }

// An integer matrix acting on the class lattice together with the rational
// cone it is claimed to preserve; no cone means the preserved cone is
// irrational and only matrix-level analysis is available.
struct ConePreservingAuto {
  IntMat matrix;
  std::optional<std::vector<IntVec>> preserved_cone;
};

struct RayPermutation {
  std::vector<size_t> image;  // matrix * ray[i] = scaling[i] * ray[image[i]]
  std::vector<Rat> scalings;  // all > 0
};

inline RayPermutation ray_permutation(const ConePreservingAuto& a) {
  if (!a.preserved_cone) throw input_error("ray_permutation: no rational cone supplied");
  const auto& rays = *a.preserved_cone;
  if (rays.empty()) throw input_error("ray_permutation: cone has no rays");
  size_t n = a.matrix.rows;
  std::vector<IntVec> prim(rays.size());
  for (size_t i = 0; i < rays.size(); ++i) {
    if (rays[i].size() != n || is_zero(rays[i]))
      throw input_error("ray_permutation: bad ray " + to_string(rays[i]));
    prim[i] = primitive(rays[i]);
    for (size_t j = 0; j < i; ++j)
      if (prim[j] == prim[i])
        throw input_error("ray_permutation: duplicate ray direction " + to_string(rays[i]));
  }

  RayPermutation out;
  std::vector<bool> hit(rays.size(), false);
  for (size_t i = 0; i < rays.size(); ++i) {
    IntVec im = a.matrix * rays[i];
    IntVec dir = primitive(im);
    size_t j = 0;
    while (j < rays.size() && !(prim[j] == dir)) ++j;
    if (j == rays.size())
      throw input_error("ray_permutation: cone not preserved, image of ray " +
                        to_string(rays[i]) + " is not a positive multiple of a ray");
    // image and target are parallel with the same direction; read the factor
    // off any nonzero coordinate
    size_t k = 0;
    while (rays[j][k] == 0) ++k;
    Rat lambda(im[k], rays[j][k]);
    lambda.canonicalize();
    check(lambda > 0, "ray_permutation: nonpositive scaling");
    check(!hit[j], "ray_permutation: two rays map to the same ray");
    hit[j] = true;
    out.image.push_back(j);
    out.scalings.push_back(lambda);
  }
  return out;
}

namespace detail {

inline unsigned long permutation_order(const std::vector<size_t>& image) {
  Int ord = 1;
  std::vector<bool> seen(image.size(), false);
  for (size_t i = 0; i < image.size(); ++i) {
    if (seen[i]) continue;
    unsigned long len = 0;
    for (size_t j = i; !seen[j]; j = image[j]) {
      seen[j] = true;
      ++len;
    }
    ord = lcm(ord, Int(len));
  }
  check(ord.fits_ulong_p(), "permutation_order: overflow");
  return ord.get_ui();
}

inline bool spanning(const std::vector<IntVec>& rays, size_t n) {
  IntMat m(rays.size(), n);
  for (size_t i = 0; i < rays.size(); ++i)
    for (size_t j = 0; j < n; ++j) m.at(i, j) = rays[i][j];
  return rank(m) == n;
}

}  // namespace detail

struct EntropyReport {
  AlgebraicNumber lambda1;
  bool positive_entropy = false;
  bool infinite_order_in_action = false;
  std::optional<unsigned long> d1;  // order of the ray permutation, rational case
  std::optional<std::vector<Rat>> lin_diagonal;  // ray scalings when every ray is fixed
};

// lambda_1 > 1 iff the class action has infinite order, for automorphisms
// preserving a finitely generated nef cone. Both sides are computed
// independently and must agree; disagreement means the input is not actually
// cone-preserving (unipotent directions) and is rejected.
inline EntropyReport positive_entropy(const ConePreservingAuto& a) {
  const IntMat& M = a.matrix;
  check(M.rows == M.cols, "positive_entropy: square matrix required");
  size_t n = M.rows;
  if (n == 0) throw input_error("positive_entropy: empty matrix");
  IntPoly cp = char_poly(M);
  Int det = (n % 2 == 0) ? cp.coeff(0) : -cp.coeff(0);
  if (abs(det) != 1) throw input_error("positive_entropy: matrix is not unimodular");

  EntropyReport r{dominant_root(cp)};
  r.positive_entropy = !all_roots_roots_of_unity(cp);

  if (a.preserved_cone) {
    if (!detail::spanning(*a.preserved_cone, n))
      throw input_error("positive_entropy: cone rays do not span the lattice");
    RayPermutation rp = ray_permutation(a);
    unsigned long d1 = detail::permutation_order(rp.image);
    r.d1 = d1;
    // M^d1 fixes every ray direction; with spanning rays it is the identity
    // exactly when all its ray scalings are 1
    r.infinite_order_in_action = !(mat_pow(M, d1) == IntMat::identity(n));
    bool fixes_rays = true;
    for (size_t i = 0; i < rp.image.size(); ++i)
      if (rp.image[i] != i) fixes_rays = false;
    if (fixes_rays) r.lin_diagonal = rp.scalings;
  } else {
    r.infinite_order_in_action = !finite_order(M);
  }

  if (r.positive_entropy != r.infinite_order_in_action)
    throw input_error(
        "positive_entropy: spectral radius and order tests disagree, the matrix "
        "does not preserve a finitely generated full cone");
  return r;
}

struct DXData {
  unsigned long d1 = 1;       // order of the group generated by the ray permutations
  unsigned long d2_bound = 1; // declared bound on the kernel of the action
  unsigned long d = 1;        // lcm(d1, d2_bound)
  std::vector<ConePreservingAuto> generators;  // the 2d-th powers of the inputs
};

inline DXData dx_membership_data(const std::vector<ConePreservingAuto>& autos,
                                 unsigned long d2_bound = 1, size_t closure_cap = 100000) {
  if (autos.empty()) throw input_error("dx_membership_data: no automorphisms given");
  if (d2_bound == 0) throw input_error("dx_membership_data: kernel bound must be positive");
  for (const auto& a : autos) {
    if (!a.preserved_cone) throw input_error("dx_membership_data: rational cone required");
    if (!(*a.preserved_cone == *autos[0].preserved_cone))
      throw input_error("dx_membership_data: inputs preserve different cones");
  }

  size_t nrays = autos[0].preserved_cone->size();
  std::vector<std::vector<size_t>> gens;
  for (const auto& a : autos) gens.push_back(ray_permutation(a).image);

  // closure of the generated permutation group by breadth-first products
  std::vector<size_t> id(nrays);
  for (size_t i = 0; i < nrays; ++i) id[i] = i;
  std::vector<std::vector<size_t>> group{id};
  for (size_t head = 0; head < group.size(); ++head) {
    for (const auto& g : gens) {
      std::vector<size_t> prod(nrays);
      for (size_t i = 0; i < nrays; ++i) prod[i] = g[group[head][i]];
      if (std::find(group.begin(), group.end(), prod) == group.end()) {
        group.push_back(prod);
        if (group.size() > closure_cap)
          throw resource_cap("dx_membership_data: permutation group closure exceeded cap");
      }
    }
  }

  DXData out;
  out.d1 = group.size();
  out.d2_bound = d2_bound;
  Int d = lcm(Int(out.d1), Int(d2_bound));
  check(d.fits_ulong_p(), "dx_membership_data: d overflow");
  out.d = d.get_ui();
  for (const auto& a : autos)
    out.generators.push_back({mat_pow(a.matrix, 2 * out.d), a.preserved_cone});
  return out;
}

// Diagonal of the Lin homomorphism: the per-ray scalings of an element that
// fixes every ray of the cone.
inline std::vector<Rat> lin_map(const ConePreservingAuto& g) {
  RayPermutation rp = ray_permutation(g);
  for (size_t i = 0; i < rp.image.size(); ++i)
    if (rp.image[i] != i)
      throw input_error("lin_map: element permutes rays nontrivially, not in the scaled-ray "
                        "subgroup");
  return rp.scalings;
}

}  // namespace toridyn
