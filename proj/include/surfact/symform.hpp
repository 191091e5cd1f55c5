#pragma once

// Alternating bilinear forms on Z_{p^k}^m: validation, block normal form
// under unimodular congruence Q -> C^T Q C, and the q-tuple read off the
// block exponents.
//
// Normal form convention: C^T Q C is block diagonal with hyperbolic blocks
// [[0, p^a], [-p^a, 0]], a ascending in [0, k-1], followed by a zero block.
// Radical coordinates are tracked as radical_rank, never as pairs with
// a = k, so q_i = m - 2 * #{a_j < i} stays literal.
//
// "Alternating" is checked as both conditions Q[i][i] = 0 and
// Q[j][i] = -Q[i][j]; for p = 2 the diagonal condition is not implied by
// antisymmetry.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "surfact/error.hpp"
#include "surfact/matmod.hpp"
#include "surfact/residue.hpp"

namespace surfact {

struct AlternatingForm {
  int m;
  Modulus mod;
  MatZ gram;
};

using QTuple = std::vector<int>;

inline AlternatingForm validate_alternating(const MatZ& Q) {
  if (Q.rows() != Q.cols()) fail(errc::shape_mismatch, "gram matrix must be square");
  const Modulus& mod = Q.modulus();
  for (int i = 0; i < Q.rows(); ++i) {
    if (Q.at(i, i) != 0)
      fail(errc::not_alternating, "nonzero diagonal at (" + std::to_string(i) + "," + std::to_string(i) + ")");
    for (int j = i + 1; j < Q.cols(); ++j)
      if (Q.at(j, i) != mod.reduce(-Q.at(i, j)))
        fail(errc::not_alternating,
             "entry (" + std::to_string(j) + "," + std::to_string(i) + ") is not the negative of (" +
                 std::to_string(i) + "," + std::to_string(j) + ")");
  }
  return AlternatingForm{Q.rows(), mod, Q};
}

struct NormalForm {
  MatZ C;                         // unimodular change of basis
  std::vector<int> pair_exponents;  // ascending, in [0, k-1]
  int radical_rank;
};

namespace detail {

// Congruence moves applied simultaneously to the working gram W and the
// accumulated basis matrix C (as column operations on C).
struct CongruenceOps {
  MatZ& W;
  MatZ& C;
  void swap_basis(int i, int j) {
    if (i == j) return;
    W.swap_rows(i, j);
    W.swap_cols(i, j);
    C.swap_cols(i, j);
  }
  void scale_basis(int j, std::int64_t u) {
    W.scale_row(j, u);
    W.scale_col(j, u);
    C.scale_col(j, u);
  }
  // basis_dst += c * basis_src
  void add_basis(int dst, int src, std::int64_t c) {
    W.add_row_multiple(dst, src, c);
    W.add_col_multiple(dst, src, c);
    C.add_col_multiple(dst, src, c);
  }
};

}  // namespace detail

inline NormalForm normal_form(const AlternatingForm& F) {
  const Modulus& mod = F.mod;
  const int m = F.m;
  const int k = mod.k();
  MatZ W = F.gram;
  MatZ C = MatZ::identity(m, mod);
  detail::CongruenceOps ops{W, C};
  std::vector<int> exps;

  int t = 0;
  while (t < m) {
    // entry of minimal valuation in the trailing block, smallest (row, col)
    int best_val = k, bi = -1, bj = -1;
    for (int i = t; i < m; ++i)
      for (int j = t; j < m; ++j) {
        if (i == j) continue;
        int v = mod.valuation(W.at(i, j));
        if (v < best_val) { best_val = v; bi = i; bj = j; }
      }
    if (bi < 0) break;  // zero block: the radical
    const int a = best_val;

    ops.swap_basis(bi, t);
    if (bj == t) bj = bi;  // the swap moved the column index along
    ops.swap_basis(bj, t + 1);

    std::int64_t pa = 1;
    for (int i = 0; i < a; ++i) pa *= mod.p();
    ops.scale_basis(t + 1, mod.unit_inverse(W.at(t, t + 1) / pa));
    // now W[t][t+1] = p^a and p^a divides the whole trailing block
    for (int s = t + 2; s < m; ++s) {
      std::int64_t c1 = W.at(t, s) / pa;
      if (c1 != 0) ops.add_basis(s, t + 1, -c1);
      std::int64_t c2 = W.at(t + 1, s) / pa;
      if (c2 != 0) ops.add_basis(s, t, c2);
    }
    exps.push_back(a);
    t += 2;
  }
  return NormalForm{C, exps, m - t};
}

// The block-diagonal matrix a NormalForm describes; handy for round trips.
inline MatZ block_matrix(const NormalForm& nf, const Modulus& mod) {
  const int m = 2 * static_cast<int>(nf.pair_exponents.size()) + nf.radical_rank;
  MatZ B(m, m, mod);
  for (std::size_t j = 0; j < nf.pair_exponents.size(); ++j) {
    std::int64_t pa = 1;
    for (int i = 0; i < nf.pair_exponents[j]; ++i) pa *= mod.p();
    int t = 2 * static_cast<int>(j);
    B.set(t, t + 1, pa);
    B.set(t + 1, t, -pa);
  }
  return B;
}

inline bool validate_q_tuple(const QTuple& q, int m, int k) {
  if (static_cast<int>(q.size()) != k) return false;
  for (int i = 0; i < k; ++i) {
    if (q[i] < 0 || q[i] > m) return false;
    if ((q[i] - m) % 2 != 0) return false;
    if (i > 0 && q[i] > q[i - 1]) return false;
  }
  return true;
}

inline QTuple q_from_exponents(const NormalForm& nf, int k) {
  const int m = 2 * static_cast<int>(nf.pair_exponents.size()) + nf.radical_rank;
  QTuple q(k);
  for (int i = 1; i <= k; ++i) {
    int pairs_below = static_cast<int>(
        std::count_if(nf.pair_exponents.begin(), nf.pair_exponents.end(),
                      [i](int a) { return a < i; }));
    q[i - 1] = m - 2 * pairs_below;
  }
  return q;
}

inline QTuple q_invariant(const AlternatingForm& F) {
  return q_from_exponents(normal_form(F), F.mod.k());
}

}  // namespace surfact
