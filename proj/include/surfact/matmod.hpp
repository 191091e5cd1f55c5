#pragma once

// Dense matrix algebra over a fixed Z_{p^k}: products, rank over the residue
// field Z_p, unimodular row/column calculus, Smith normal form and kernels
// modulo p^i.
//
// Z_{p^k} is a local ring, so Smith reduction needs no gcd loop: the pivot
// is any entry of minimal p-adic valuation, and it divides everything left
// in the submatrix. Pivot ties break on the smallest (row, col) index so the
// decomposition is reproducible across runs and platforms.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "surfact/error.hpp"
#include "surfact/residue.hpp"

namespace surfact {

class MatZ {
public:
  MatZ(int rows, int cols, Modulus mod)
      : rows_(rows), cols_(cols), mod_(mod), a_(static_cast<std::size_t>(rows) * cols, 0) {
    if (rows < 0 || cols < 0) fail(errc::shape_mismatch, "negative matrix dimension");
  }

  static MatZ identity(int n, Modulus mod) {
    MatZ I(n, n, mod);
    for (int i = 0; i < n; ++i) I.set(i, i, 1);
    return I;
  }

  static MatZ from_rows(const std::vector<Vec>& rows, Modulus mod) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
    MatZ M(r, c, mod);
    for (int i = 0; i < r; ++i) {
      if (static_cast<int>(rows[i].size()) != c)
        fail(errc::shape_mismatch, "ragged row lengths");
      for (int j = 0; j < c; ++j) M.set(i, j, rows[i][j]);
    }
    return M;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Modulus& modulus() const { return mod_; }

  std::int64_t at(int i, int j) const { return a_[idx(i, j)]; }
  Residue res(int i, int j) const { return Residue(at(i, j), mod_); }
  void set(int i, int j, std::int64_t v) { a_[idx(i, j)] = mod_.reduce(v); }

  Vec row(int i) const {
    Vec out(cols_);
    for (int j = 0; j < cols_; ++j) out[j] = at(i, j);
    return out;
  }
  Vec col(int j) const {
    Vec out(rows_);
    for (int i = 0; i < rows_; ++i) out[i] = at(i, j);
    return out;
  }

  MatZ transpose() const {
    MatZ T(cols_, rows_, mod_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) T.set(j, i, at(i, j));
    return T;
  }

  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](std::int64_t v) { return v == 0; });
  }

  // Elementary operations; all reduce into [0, p^k).
  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < cols_; ++c) std::swap(a_[idx(i, c)], a_[idx(j, c)]);
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < rows_; ++r) std::swap(a_[idx(r, i)], a_[idx(r, j)]);
  }
  void scale_row(int i, std::int64_t u) {
    for (int c = 0; c < cols_; ++c) set(i, c, at(i, c) * mod_.reduce(u));
  }
  void scale_col(int j, std::int64_t u) {
    for (int r = 0; r < rows_; ++r) set(r, j, at(r, j) * mod_.reduce(u));
  }
  // row_dst += c * row_src
  void add_row_multiple(int dst, int src, std::int64_t c) {
    std::int64_t cr = mod_.reduce(c);
    for (int j = 0; j < cols_; ++j) set(dst, j, at(dst, j) + cr * at(src, j));
  }
  // col_dst += c * col_src
  void add_col_multiple(int dst, int src, std::int64_t c) {
    std::int64_t cr = mod_.reduce(c);
    for (int i = 0; i < rows_; ++i) set(i, dst, at(i, dst) + cr * at(i, src));
  }

  friend bool operator==(const MatZ& a, const MatZ& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.mod_ == b.mod_ && a.a_ == b.a_;
  }
  friend bool operator!=(const MatZ& a, const MatZ& b) { return !(a == b); }

  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < rows_; ++i) {
      s += i ? ",[" : "[";
      for (int j = 0; j < cols_; ++j) s += (j ? "," : "") + std::to_string(at(i, j));
      s += "]";
    }
    return s + "]";
  }

private:
  std::size_t idx(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
      fail(errc::shape_mismatch, "index out of range");
    return static_cast<std::size_t>(i) * cols_ + j;
  }

  int rows_, cols_;
  Modulus mod_;
  std::vector<std::int64_t> a_;
};

inline MatZ mat_mul(const MatZ& A, const MatZ& B) {
  if (A.modulus() != B.modulus())
    fail(errc::modulus_mismatch, A.modulus().str() + " vs " + B.modulus().str());
  if (A.cols() != B.rows()) fail(errc::shape_mismatch, "inner dimensions disagree");
  const Modulus& mod = A.modulus();
  MatZ C(A.rows(), B.cols(), mod);
  for (int i = 0; i < A.rows(); ++i)
    for (int l = 0; l < A.cols(); ++l) {
      std::int64_t a = A.at(i, l);
      if (a == 0) continue;
      for (int j = 0; j < B.cols(); ++j)
        C.set(i, j, C.at(i, j) + a * B.at(l, j));
    }
  return C;
}

inline Vec mat_vec_mul(const MatZ& A, const Vec& v) {
  if (static_cast<int>(v.size()) != A.cols()) fail(errc::shape_mismatch, "vector length");
  const Modulus& mod = A.modulus();
  Vec out(A.rows(), 0);
  for (int i = 0; i < A.rows(); ++i) {
    std::int64_t acc = 0;
    for (int j = 0; j < A.cols(); ++j) acc = mod.reduce(acc + A.at(i, j) * mod.reduce(v[j]));
    out[i] = acc;
  }
  return out;
}

// Rank of A mod p, over the field Z_p.
inline int rank_mod_p(const MatZ& A) {
  const std::int64_t p = A.modulus().p();
  std::vector<std::int64_t> w(A.rows() * static_cast<std::size_t>(A.cols()));
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) w[i * static_cast<std::size_t>(A.cols()) + j] = A.at(i, j) % p;
  Modulus fp(p, 1);
  int rank = 0;
  for (int col = 0; col < A.cols() && rank < A.rows(); ++col) {
    int pivot = -1;
    for (int r = rank; r < A.rows(); ++r)
      if (w[r * static_cast<std::size_t>(A.cols()) + col] != 0) { pivot = r; break; }
    if (pivot < 0) continue;
    for (int j = 0; j < A.cols(); ++j)
      std::swap(w[pivot * static_cast<std::size_t>(A.cols()) + j],
                w[rank * static_cast<std::size_t>(A.cols()) + j]);
    std::int64_t inv = fp.unit_inverse(w[rank * static_cast<std::size_t>(A.cols()) + col]);
    for (int r = 0; r < A.rows(); ++r) {
      if (r == rank) continue;
      std::int64_t f = w[r * static_cast<std::size_t>(A.cols()) + col];
      if (f == 0) continue;
      std::int64_t m = (f * inv) % p;
      for (int j = col; j < A.cols(); ++j) {
        std::int64_t& x = w[r * static_cast<std::size_t>(A.cols()) + j];
        x = ((x - m * w[rank * static_cast<std::size_t>(A.cols()) + j]) % p + p) % p;
      }
    }
    ++rank;
  }
  return rank;
}

inline bool is_unimodular(const MatZ& A) {
  if (A.rows() != A.cols()) fail(errc::shape_mismatch, "unimodularity needs a square matrix");
  return rank_mod_p(A) == A.rows();
}

// U * A * V = diag(p^{d_1}, ..., p^{d_r}) with d_1 <= ... <= d_r, r = min(rows, cols).
// Exponent k encodes a zero diagonal entry. U and V are unimodular.
struct SmithDecomposition {
  MatZ U;
  MatZ V;
  std::vector<int> divisor_exponents;
};

inline SmithDecomposition smith_normal_form(const MatZ& A) {
  const Modulus& mod = A.modulus();
  const int k = mod.k();
  MatZ D = A;
  MatZ U = MatZ::identity(A.rows(), mod);
  MatZ V = MatZ::identity(A.cols(), mod);
  const int nd = std::min(A.rows(), A.cols());
  std::vector<int> exps;
  exps.reserve(nd);

  std::int64_t pw = 1;  // p^a for the current pivot
  for (int t = 0; t < nd; ++t) {
    // minimal-valuation pivot, smallest (row, col) among minima
    int best_val = k, bi = -1, bj = -1;
    for (int i = t; i < A.rows(); ++i)
      for (int j = t; j < A.cols(); ++j) {
        int v = mod.valuation(D.at(i, j));
        if (v < best_val) { best_val = v; bi = i; bj = j; }
      }
    if (bi < 0) break;  // all-zero tail
    const int a = best_val;
    D.swap_rows(t, bi); U.swap_rows(t, bi);
    D.swap_cols(t, bj); V.swap_cols(t, bj);
    pw = 1;
    for (int i = 0; i < a; ++i) pw *= mod.p();
    std::int64_t unit = D.at(t, t) / pw;
    std::int64_t inv = mod.unit_inverse(unit);
    D.scale_row(t, inv); U.scale_row(t, inv);
    // clear below; every entry in the submatrix is divisible by p^a
    for (int i = t + 1; i < A.rows(); ++i) {
      std::int64_t c = D.at(i, t) / pw;
      if (c == 0) continue;
      D.add_row_multiple(i, t, -c); U.add_row_multiple(i, t, -c);
    }
    // clear to the right; column t now touches only row t
    for (int j = t + 1; j < A.cols(); ++j) {
      std::int64_t c = D.at(t, j) / pw;
      if (c == 0) continue;
      D.add_col_multiple(j, t, -c); V.add_col_multiple(j, t, -c);
    }
    exps.push_back(a);
  }
  exps.resize(nd, k);
  return SmithDecomposition{U, V, exps};
}

// Generating set for {h in Z_{p^k}^{cols} : A h == 0 (mod p^i)}, 1 <= i <= k.
// In Smith coordinates y = V^{-1} h the j-th constraint reads
// p^{d_j} y_j == 0 (mod p^i), so y_j ranges over p^{max(i-d_j,0)} Z_{p^k}.
inline std::vector<Vec> kernel_mod(const MatZ& A, int i) {
  const Modulus& mod = A.modulus();
  if (i < 1 || i > mod.k()) fail(errc::shape_mismatch, "kernel exponent out of [1, k]");
  SmithDecomposition snf = smith_normal_form(A);
  const int nd = static_cast<int>(snf.divisor_exponents.size());
  std::vector<Vec> gens;
  for (int j = 0; j < A.cols(); ++j) {
    int e = j < nd ? std::max(i - snf.divisor_exponents[j], 0) : 0;
    if (e >= mod.k()) continue;  // contributes only 0
    std::int64_t pe = 1;
    for (int t = 0; t < e; ++t) pe *= mod.p();
    Vec g(A.cols(), 0);
    for (int r = 0; r < A.cols(); ++r) g[r] = mod.reduce(pe * snf.V.at(r, j));
    gens.push_back(std::move(g));
  }
  return gens;
}

// Inverse of a unimodular matrix by Gauss-Jordan with unit pivots.
inline MatZ inverse(const MatZ& A) {
  if (A.rows() != A.cols()) fail(errc::shape_mismatch, "inverse needs a square matrix");
  const Modulus& mod = A.modulus();
  MatZ W = A;
  MatZ inv = MatZ::identity(A.rows(), mod);
  for (int t = 0; t < A.rows(); ++t) {
    int pivot = -1;
    for (int r = t; r < A.rows(); ++r)
      if (mod.is_unit(W.at(r, t))) { pivot = r; break; }
    if (pivot < 0) fail(errc::not_unimodular, "no unit pivot in column " + std::to_string(t));
    W.swap_rows(t, pivot); inv.swap_rows(t, pivot);
    std::int64_t s = mod.unit_inverse(W.at(t, t));
    W.scale_row(t, s); inv.scale_row(t, s);
    for (int r = 0; r < A.rows(); ++r) {
      if (r == t) continue;
      std::int64_t c = W.at(r, t);
      if (c == 0) continue;
      W.add_row_multiple(r, t, -c); inv.add_row_multiple(r, t, -c);
    }
  }
  return inv;
}

}  // namespace surfact
