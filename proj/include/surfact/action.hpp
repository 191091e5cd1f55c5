#pragma once

// The combinatorial stand-in for an orientation-preserving Z_{p^k}^m action
// on a closed oriented surface: the quotient genus g, the monodromy matrix
// theta on the fixed basis e_1..e_2g of H_1 of the quotient (column j is the
// image of e_j), and the branch data as a multiplicity function on nonzero
// group elements.
//
// Basis convention, fixed once: the intersection pairing on H_1 is
// (e_i, e_j) = 1 when i + j = 2g + 1 and i < j (1-based), the antidiagonal
// matrix J with J^2 = -I. Branch loops are not stored as extra columns; only
// their images with multiplicity, subject to sum l(h) h = 0.
//
// The induced alternating form on the dual of G_free is (pi theta) J
// (pi theta)^T; the derivation solves (v_a, e_j) = (theta^* a)(e_j) for v_a
// and uses (J^T)^{-1} = J. Tests check this shortcut against the defining
// linear system.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "surfact/error.hpp"
#include "surfact/matmod.hpp"
#include "surfact/residue.hpp"
#include "surfact/symform.hpp"

namespace surfact {

// Multiplicities of branch monodromies: nonzero h -> count >= 1; the map
// order (lexicographic on h) is the canonical serialization order.
using CharFunction = std::map<Vec, std::int64_t>;

enum class EquivMode { strong, weak };

struct ActionDescriptor {
  Modulus mod;
  int m;
  int g;
  MatZ theta;  // m x 2g
  CharFunction branches;
};

inline std::int64_t checked_pow(std::int64_t base, std::int64_t exp) {
  __int128 acc = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > (static_cast<__int128>(1) << 62))
      fail(errc::overflow, "p^{km} exceeds the 2^62 budget");
  }
  return static_cast<std::int64_t>(acc);
}

inline std::int64_t group_order(const Modulus& mod, int m) {
  return checked_pow(mod.p(), static_cast<std::int64_t>(mod.k()) * m);
}

// Columns: the distinct branch monodromies (the support of l), in canonical
// order. Their span is G_fix.
inline MatZ g_fix_generators(const ActionDescriptor& A) {
  MatZ F(A.m, static_cast<int>(A.branches.size()), A.mod);
  int j = 0;
  for (const auto& [h, count] : A.branches) {
    for (int i = 0; i < A.m; ++i) F.set(i, j, h[i]);
    ++j;
  }
  return F;
}

inline const ActionDescriptor& validate(const ActionDescriptor& A) {
  if (A.m < 1) fail(errc::shape_mismatch, "m must be >= 1");
  if (A.g < 0) fail(errc::shape_mismatch, "quotient genus must be >= 0");
  if (A.theta.modulus() != A.mod) fail(errc::modulus_mismatch, "theta modulus");
  if (A.theta.rows() != A.m || A.theta.cols() != 2 * A.g)
    fail(errc::shape_mismatch, "theta must be m x 2g");
  Vec sum(A.m, 0);
  for (const auto& [h, count] : A.branches) {
    if (static_cast<int>(h.size()) != A.m) fail(errc::shape_mismatch, "branch vector length");
    if (count < 1) fail(errc::shape_mismatch, "branch count must be positive");
    bool zero = true;
    for (std::int64_t v : h) {
      if (v < 0 || v >= A.mod.pk()) fail(errc::shape_mismatch, "branch entry out of [0, p^k)");
      if (v != 0) zero = false;
    }
    if (zero) fail(errc::zero_branch_value, "branch monodromy must be nonzero in G");
    for (int i = 0; i < A.m; ++i)
      sum[i] = A.mod.reduce(sum[i] + A.mod.reduce(count) * h[i]);
  }
  for (int i = 0; i < A.m; ++i)
    if (sum[i] != 0) fail(errc::branch_sum_nonzero, "sum of l(h) h is nonzero in G");
  // theta together with the branch monodromies must generate G
  MatZ gen(A.m, A.theta.cols() + static_cast<int>(A.branches.size()), A.mod);
  for (int i = 0; i < A.m; ++i)
    for (int j = 0; j < A.theta.cols(); ++j) gen.set(i, j, A.theta.at(i, j));
  MatZ F = g_fix_generators(A);
  for (int i = 0; i < A.m; ++i)
    for (int j = 0; j < F.cols(); ++j) gen.set(i, A.theta.cols() + j, F.at(i, j));
  if (rank_mod_p(gen) != A.m)
    fail(errc::not_surjective, "theta and branch data do not generate G");
  return A;
}

// The standard intersection form on H_1 of a genus-g surface in the fixed
// basis: antidiagonal +1 in the top half, -1 in the bottom half.
inline MatZ intersection_gram(int g, const Modulus& mod) {
  if (g < 0) fail(errc::shape_mismatch, "genus must be >= 0");
  MatZ J(2 * g, 2 * g, mod);
  for (int i = 0; i < g; ++i) {
    J.set(i, 2 * g - 1 - i, 1);
    J.set(2 * g - 1 - i, i, -1);
  }
  return J;
}

// G_free = G / G_fix together with a projection pi whose kernel is exactly
// G_fix. Defined only when the quotient is a free module: every Smith
// exponent of the generator matrix must be 0 or k.
struct FreeStructure {
  int n;    // rank of G_free
  MatZ pi;  // n x m, surjective, kernel = G_fix
};

inline FreeStructure g_free_structure(const ActionDescriptor& A) {
  MatZ F = g_fix_generators(A);
  if (F.cols() == 0) return FreeStructure{A.m, MatZ::identity(A.m, A.mod)};
  SmithDecomposition snf = smith_normal_form(F);
  const int k = A.mod.k();
  const int nd = static_cast<int>(snf.divisor_exponents.size());
  std::vector<int> keep;
  for (int i = 0; i < A.m; ++i) {
    if (i < nd) {
      int d = snf.divisor_exponents[i];
      if (d == 0) continue;
      if (d != k)
        fail(errc::quotient_not_free,
             "G/G_fix has invariant factor p^" + std::to_string(k - d) + " short of p^" + std::to_string(k));
    }
    keep.push_back(i);
  }
  MatZ pi(static_cast<int>(keep.size()), A.m, A.mod);
  for (std::size_t r = 0; r < keep.size(); ++r)
    for (int j = 0; j < A.m; ++j) pi.set(static_cast<int>(r), j, snf.U.at(keep[r], j));
  return FreeStructure{static_cast<int>(keep.size()), pi};
}

inline std::int64_t element_order(const Vec& h, const Modulus& mod) {
  int minval = mod.k();
  for (std::int64_t v : h) minval = std::min(minval, mod.valuation(v));
  return checked_pow(mod.p(), mod.k() - minval);
}

// Riemann-Hurwitz: 2g~ - 2 = |G| (2g - 2) + sum_h l(h) (|G| / ord h)(ord h - 1).
inline std::int64_t covering_genus(const ActionDescriptor& A) {
  const std::int64_t N = group_order(A.mod, A.m);
  __int128 rhs = static_cast<__int128>(N) * (2 * static_cast<std::int64_t>(A.g) - 2);
  for (const auto& [h, count] : A.branches) {
    std::int64_t o = element_order(h, A.mod);
    rhs += static_cast<__int128>(count) * (N / o) * (o - 1);
    if (rhs > (static_cast<__int128>(1) << 62)) fail(errc::overflow, "genus exceeds the 2^62 budget");
  }
  if (((rhs % 2) + 2) % 2 != 0)
    fail(errc::non_integral_genus, "Riemann-Hurwitz count is odd");
  __int128 gt = (rhs + 2) / 2;
  if (gt < 0) fail(errc::negative_genus, "covering genus would be negative");
  return static_cast<std::int64_t>(gt);
}

// The alternating form induced on the dual of G_free.
inline AlternatingForm induced_form(const ActionDescriptor& A) {
  FreeStructure fs = g_free_structure(A);
  MatZ Mf = mat_mul(fs.pi, A.theta);
  MatZ J = intersection_gram(A.g, A.mod);
  MatZ Q = mat_mul(mat_mul(Mf, J), Mf.transpose());
  return validate_alternating(Q);
}

struct StrongInvariant {
  std::int64_t covering_genus;
  CharFunction l;
  AlternatingForm gram;  // on the dual of G_free, in the basis fixed by pi
};

inline StrongInvariant strong_invariant(const ActionDescriptor& A) {
  validate(A);
  return StrongInvariant{covering_genus(A), A.branches, induced_form(A)};
}

}  // namespace surfact
