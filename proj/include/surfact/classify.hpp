#pragma once

// Equivalence decisions, realization of invariants as explicit free actions,
// the minimal covering genus, and enumeration of weak classes.
//
// Strong equivalence compares the full invariant bundle: covering genus,
// characteristic function, and the induced gram matrix entrywise (in the
// dual basis fixed by the deterministic G_free projection). Weak
// equivalence matches the characteristic functions up to Aut(G) and the
// q-tuples; q is a complete congruence invariant of the induced form, so a
// separate form-transporting automorphism never needs to be exhibited for
// the verdict. The Aut(G) search is exhaustive while |GL_m(Z_{p^k})| stays
// under the configured budget; beyond it the verdict degrades to canonical
// forms under coordinate permutations and unit scalings and is flagged
// partial.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "surfact/action.hpp"
#include "surfact/error.hpp"
#include "surfact/matmod.hpp"
#include "surfact/oracle.hpp"
#include "surfact/residue.hpp"
#include "surfact/symform.hpp"

namespace surfact {

struct ClassifyOptions {
  std::int64_t aut_budget = kDefaultBudget;  // bound on |GL_m(Z_{p^k})|
  bool force_exhaustive = false;
};

struct EquivalenceVerdict {
  bool equivalent;
  EquivMode mode;
  std::optional<MatZ> witness;  // weak mode: an automorphism of G
  std::string reason;           // mismatch description when not equivalent
  bool partial = false;         // decided with the degraded Aut(G) search
};

// Pushforward of a characteristic function along an automorphism: the key
// v moves to alpha v, counts unchanged.
inline CharFunction transform_char_function(const MatZ& alpha, const CharFunction& l) {
  CharFunction out;
  for (const auto& [h, count] : l) out[mat_vec_mul(alpha, h)] = count;
  return out;
}

struct CanonicalL {
  CharFunction l;
  bool exact;  // canonical over all of Aut(G), not just the fallback subgroup
};

namespace detail {

// Fallback canonicalization subgroup: coordinate permutations composed with
// scalar unit multiplications. Permutations are skipped above 8 coordinates
// where m! itself would blow the budget.
inline std::vector<MatZ> permutation_scalings(int m, const Modulus& mod) {
  std::vector<std::int64_t> units;
  for (std::int64_t u = 1; u < mod.pk(); ++u)
    if (mod.is_unit(u)) units.push_back(u);
  std::vector<std::vector<int>> perms;
  std::vector<int> id(m);
  std::iota(id.begin(), id.end(), 0);
  if (m <= 8) {
    std::vector<int> perm = id;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    perms.push_back(id);
  }
  std::vector<MatZ> out;
  out.reserve(perms.size() * units.size());
  for (const auto& perm : perms)
    for (std::int64_t u : units) {
      MatZ A(m, m, mod);
      for (int j = 0; j < m; ++j) A.set(perm[j], j, u);
      out.push_back(std::move(A));
    }
  return out;
}

inline const std::int64_t kNoCandidateLimit = std::int64_t{1} << 62;

}  // namespace detail

inline CanonicalL canonicalize_l(const CharFunction& l, int m, const Modulus& mod,
                                 const ClassifyOptions& opts = {}) {
  if (l.empty()) return CanonicalL{l, true};
  const bool exact = aut_group_order(m, mod) <= opts.aut_budget;
  std::vector<MatZ> group = exact ? enumerate_aut(m, mod, detail::kNoCandidateLimit)
                                  : detail::permutation_scalings(m, mod);
  CharFunction best = l;
  for (const MatZ& a : group) {
    CharFunction cand = transform_char_function(a, l);
    if (cand < best) best = std::move(cand);
  }
  return CanonicalL{best, exact};
}

struct WeakInvariant {
  std::int64_t covering_genus;
  CharFunction l_canonical;
  bool l_canonical_exact;
  QTuple q;  // of the induced form on the dual of G_free
};

inline WeakInvariant weak_invariant(const ActionDescriptor& A, const ClassifyOptions& opts = {}) {
  validate(A);
  CanonicalL cl = canonicalize_l(A.branches, A.m, A.mod, opts);
  return WeakInvariant{covering_genus(A), cl.l, cl.exact, q_invariant(induced_form(A))};
}

namespace detail {

inline void check_compatible(const ActionDescriptor& A, const ActionDescriptor& B) {
  if (A.mod != B.mod || A.m != B.m)
    fail(errc::incompatible_groups,
         "Z_" + A.mod.str() + "^" + std::to_string(A.m) + " vs Z_" + B.mod.str() + "^" +
             std::to_string(B.m));
}

}  // namespace detail

inline EquivalenceVerdict strong_equivalent(const ActionDescriptor& A, const ActionDescriptor& B) {
  detail::check_compatible(A, B);
  StrongInvariant ia = strong_invariant(A);
  StrongInvariant ib = strong_invariant(B);
  if (ia.covering_genus != ib.covering_genus)
    return {false, EquivMode::strong, std::nullopt,
            "covering genus mismatch: " + std::to_string(ia.covering_genus) + " vs " +
                std::to_string(ib.covering_genus)};
  if (ia.l != ib.l)
    return {false, EquivMode::strong, std::nullopt, "characteristic function mismatch"};
  if (ia.gram.gram != ib.gram.gram)
    return {false, EquivMode::strong, std::nullopt,
            "gram mismatch: " + ia.gram.gram.str() + " vs " + ib.gram.gram.str()};
  return {true, EquivMode::strong, std::nullopt, ""};
}

inline EquivalenceVerdict weak_equivalent(const ActionDescriptor& A, const ActionDescriptor& B,
                                          const ClassifyOptions& opts = {}) {
  detail::check_compatible(A, B);
  validate(A);
  validate(B);
  std::int64_t ga = covering_genus(A), gb = covering_genus(B);
  if (ga != gb)
    return {false, EquivMode::weak, std::nullopt,
            "covering genus mismatch: " + std::to_string(ga) + " vs " + std::to_string(gb)};
  QTuple qa = q_invariant(induced_form(A));
  QTuple qb = q_invariant(induced_form(B));
  const bool in_budget = aut_group_order(A.m, A.mod) <= opts.aut_budget;

  if (A.branches.empty() && B.branches.empty()) {
    if (qa != qb) return {false, EquivMode::weak, std::nullopt, "q mismatch"};
    EquivalenceVerdict v{true, EquivMode::weak, std::nullopt, ""};
    // a change of G-coordinates carrying the first form to the second;
    // equal forms need no search
    MatZ Qa = induced_form(A).gram, Qb = induced_form(B).gram;
    if (Qa == Qb) {
      v.witness = MatZ::identity(A.m, A.mod);
    } else if (in_budget) {
      for (const MatZ& a : enumerate_aut(A.m, A.mod, detail::kNoCandidateLimit))
        if (mat_mul(mat_mul(a, Qa), a.transpose()) == Qb) {
          v.witness = a;
          break;
        }
    }
    return v;
  }

  if (in_budget) {
    std::optional<MatZ> witness;
    if (A.branches == B.branches) witness = MatZ::identity(A.m, A.mod);
    for (const MatZ& a : enumerate_aut(A.m, A.mod, detail::kNoCandidateLimit)) {
      if (witness) break;
      if (transform_char_function(a, A.branches) == B.branches) witness = a;
    }
    if (!witness)
      return {false, EquivMode::weak, std::nullopt,
              "characteristic functions are not Aut(G)-equivalent"};
    if (qa != qb) return {false, EquivMode::weak, std::nullopt, "q mismatch"};
    return {true, EquivMode::weak, witness, ""};
  }
  if (opts.force_exhaustive)
    fail(errc::search_budget_exceeded,
         "|GL_" + std::to_string(A.m) + "(Z_" + A.mod.str() + ")| above the exhaustive budget");

  CanonicalL ca = canonicalize_l(A.branches, A.m, A.mod, opts);
  CanonicalL cb = canonicalize_l(B.branches, B.m, B.mod, opts);
  const bool partial = !(ca.exact && cb.exact);
  if (ca.l != cb.l)
    return {false, EquivMode::weak, std::nullopt,
            "characteristic function canonical forms differ", partial};
  if (qa != qb) return {false, EquivMode::weak, std::nullopt, "q mismatch", partial};
  return {true, EquivMode::weak, std::nullopt, "", partial};
}

// Paper-style lower bound for the genus of the covering surface carrying a
// free action with the given q: p^{km} (1/2 (m + q_1) - 1) + 1.
inline std::int64_t min_covering_genus(const QTuple& q, const Modulus& mod, int m) {
  if (!validate_q_tuple(q, m, mod.k()))
    fail(errc::invalid_q_tuple, "q does not satisfy the monotonicity/parity constraints");
  const std::int64_t N = group_order(mod, m);
  __int128 r = static_cast<__int128>(N) * ((m + q[0]) / 2 - 1) + 1;
  if (r > (static_cast<__int128>(1) << 62)) fail(errc::overflow, "genus exceeds the 2^62 budget");
  return static_cast<std::int64_t>(r);
}

// A quotient surface of genus g has room for the form iff g covers one
// handle per unit hyperbolic pair, two per non-unit pair, and one per
// radical coordinate; this total equals (m + q_1)/2.
inline bool realizable(const AlternatingForm& F, int g) {
  NormalForm nf = normal_form(F);
  int p0 = static_cast<int>(std::count(nf.pair_exponents.begin(), nf.pair_exponents.end(), 0));
  int pplus = static_cast<int>(nf.pair_exponents.size()) - p0;
  return g >= p0 + 2 * pplus + nf.radical_rank;
}

// Explicit free action with induced form F on a genus-g quotient. Built
// blockwise in normal-form coordinates, consuming fresh symplectic pairs in
// ascending order, then pulled back through the congruence.
inline ActionDescriptor realize(const AlternatingForm& F, int g) {
  if (!realizable(F, g))
    fail(errc::not_realizable,
         "no free action on a genus-" + std::to_string(g) + " quotient induces this form");
  const Modulus& mod = F.mod;
  const int m = F.m;
  NormalForm nf = normal_form(F);
  MatZ M0(m, 2 * g, mod);
  int next_pair = 0;
  auto x_index = [](int s) { return s; };
  auto y_index = [g](int s) { return 2 * g - 1 - s; };
  int row = 0;
  for (int a : nf.pair_exponents) {
    if (a == 0) {
      int s = next_pair++;
      M0.set(row, x_index(s), 1);
      M0.set(row + 1, y_index(s), 1);
    } else {
      std::int64_t pa = 1;
      for (int i = 0; i < a; ++i) pa *= mod.p();
      int s = next_pair++;
      int u = next_pair++;
      M0.set(row, x_index(s), 1);
      M0.set(row + 1, y_index(s), pa);
      M0.set(row + 1, x_index(u), 1);
    }
    row += 2;
  }
  for (int r = 0; r < nf.radical_rank; ++r) {
    M0.set(row, x_index(next_pair++), 1);
    ++row;
  }
  MatZ M = mat_mul(inverse(nf.C).transpose(), M0);
  ActionDescriptor A{mod, m, g, M, {}};
  validate(A);
  return A;
}

// The block form whose exponent multiset reproduces q: #{a_j < i} must be
// (m - q_i)/2, so exponent t occurs (m - q_{t+1})/2 - (m - q_t)/2 times and
// the radical has rank q_k.
inline AlternatingForm form_from_q(const QTuple& q, int m, const Modulus& mod) {
  if (!validate_q_tuple(q, m, mod.k()))
    fail(errc::invalid_q_tuple, "q does not satisfy the monotonicity/parity constraints");
  std::vector<int> exps;
  int prev = 0;
  for (int i = 1; i <= mod.k(); ++i) {
    int ci = (m - q[i - 1]) / 2;
    for (int rep = 0; rep < ci - prev; ++rep) exps.push_back(i - 1);
    prev = ci;
  }
  NormalForm nf{MatZ::identity(m, mod), exps, q[mod.k() - 1]};
  return validate_alternating(block_matrix(nf, mod));
}

// All q realizable by a free action on a covering surface of the given
// genus, in ascending lexicographic order.
inline std::vector<QTuple> enumerate_weak_classes(const Modulus& mod, int m,
                                                  std::int64_t covering_genus) {
  std::vector<QTuple> out;
  const std::int64_t N = group_order(mod, m);
  if (covering_genus < 1 || (covering_genus - 1) % N != 0) return out;
  const std::int64_t g = (covering_genus - 1) / N + 1;
  // the genus bound g >= (m + q_1)/2 caps the leading entry
  __int128 room = 2 * static_cast<__int128>(g) - m;
  const int q1_cap = room >= m ? m : static_cast<int>(room < 0 ? -1 : room);
  QTuple q(mod.k());
  auto rec = [&](auto&& self, int i, int cap) -> void {
    if (i == mod.k()) {
      out.push_back(q);
      return;
    }
    for (int v = m % 2; v <= cap; v += 2) {
      q[i] = v;
      self(self, i + 1, v);
    }
  };
  rec(rec, 0, q1_cap);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace surfact
