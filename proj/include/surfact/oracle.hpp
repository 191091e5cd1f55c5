#pragma once

// Brute-force ground truth at tiny parameters: enumerate the symplectic
// group and Aut(G) over Z_{p^k}, partition monodromy matrices into orbits,
// compute q straight from its kernel/mu definition, and verify that
// form-preserving isomorphisms of free subgroups extend to symplectic
// automorphisms of the ambient module.
//
// Budgets are predicted candidate counts, not wall time, so CI behavior is
// deterministic. Enumerations build columns subject to the constraints that
// must hold, which prunes the raw (p^k)^(n^2) space; the raw count is still
// what the guard charges against.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "surfact/action.hpp"
#include "surfact/error.hpp"
#include "surfact/matmod.hpp"
#include "surfact/residue.hpp"
#include "surfact/symform.hpp"

namespace surfact {

inline constexpr std::int64_t kDefaultBudget = 10'000'000;

namespace detail {

// Predicted candidate count base^exp, saturating instead of overflowing.
inline std::int64_t sat_pow(std::int64_t base, std::int64_t exp) {
  __int128 acc = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > (static_cast<__int128>(1) << 62)) return std::int64_t{1} << 62;
  }
  return static_cast<std::int64_t>(acc);
}

// All vectors of Z_{p^k}^len in lexicographic order, most significant
// coordinate first.
inline bool next_vec(Vec& v, std::int64_t pk) {
  for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i) {
    if (++v[i] < pk) return true;
    v[i] = 0;
  }
  return false;
}

// (u, v) under the gram matrix J.
inline std::int64_t pair_under(const MatZ& J, const Vec& u, const Vec& v) {
  const Modulus& mod = J.modulus();
  std::int64_t acc = 0;
  for (int i = 0; i < J.rows(); ++i) {
    if (u[i] == 0) continue;
    std::int64_t row = 0;
    for (int j = 0; j < J.cols(); ++j) row = mod.reduce(row + J.at(i, j) * v[j]);
    acc = mod.reduce(acc + u[i] * row);
  }
  return acc;
}

}  // namespace detail

// All S with S^T J S = J over Z_{p^k}, i.e. column tuples whose pairwise
// products under J reproduce J itself. Deterministic lexicographic order.
inline std::vector<MatZ> enumerate_sp(int g, const Modulus& mod,
                                      std::int64_t budget = kDefaultBudget) {
  const int n = 2 * g;
  if (detail::sat_pow(mod.pk(), static_cast<std::int64_t>(n) * n) > budget)
    fail(errc::budget_exceeded, "symplectic enumeration above candidate budget");
  MatZ J = intersection_gram(g, mod);
  std::vector<MatZ> out;
  std::vector<Vec> cols(n, Vec(n, 0));
  auto rec = [&](auto&& self, int t) -> void {
    if (t == n) {
      MatZ S(n, n, mod);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) S.set(i, j, cols[j][i]);
      out.push_back(std::move(S));
      return;
    }
    Vec c(n, 0);
    do {
      bool ok = true;
      for (int i = 0; i < t && ok; ++i)
        ok = detail::pair_under(J, cols[i], c) == J.at(i, t);
      if (!ok) continue;
      cols[t] = c;
      self(self, t + 1);
    } while (detail::next_vec(c, mod.pk()));
  };
  if (n == 0) return {MatZ(0, 0, mod)};
  rec(rec, 0);
  return out;
}

// All unimodular m x m matrices over Z_{p^k}: column tuples independent
// mod p. Deterministic lexicographic order.
inline std::vector<MatZ> enumerate_aut(int m, const Modulus& mod,
                                       std::int64_t budget = kDefaultBudget) {
  if (detail::sat_pow(mod.pk(), static_cast<std::int64_t>(m) * m) > budget)
    fail(errc::budget_exceeded, "Aut(G) enumeration above candidate budget");
  std::vector<MatZ> out;
  MatZ work(m, 0, mod);
  std::vector<Vec> cols;
  auto rec = [&](auto&& self) -> void {
    int t = static_cast<int>(cols.size());
    if (t == m) {
      MatZ A(m, m, mod);
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) A.set(i, j, cols[j][i]);
      out.push_back(std::move(A));
      return;
    }
    Vec c(m, 0);
    do {
      MatZ prefix(m, t + 1, mod);
      for (int j = 0; j < t; ++j)
        for (int i = 0; i < m; ++i) prefix.set(i, j, cols[j][i]);
      for (int i = 0; i < m; ++i) prefix.set(i, t, c[i]);
      if (rank_mod_p(prefix) != t + 1) continue;
      cols.push_back(c);
      self(self);
      cols.pop_back();
    } while (detail::next_vec(c, mod.pk()));
  };
  if (m == 0) return {MatZ(0, 0, mod)};
  rec(rec);
  return out;
}

// |GL_m(Z_{p^k})| = p^{(k-1)m^2} * prod_{i<m}(p^m - p^i), saturating.
inline std::int64_t aut_group_order(int m, const Modulus& mod) {
  __int128 acc = 1;
  const __int128 cap = static_cast<__int128>(1) << 62;
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(mod.k() - 1) * m * m; ++i) {
    acc *= mod.p();
    if (acc > cap) return std::int64_t{1} << 62;
  }
  std::int64_t pm = detail::sat_pow(mod.p(), m);
  for (int i = 0; i < m; ++i) {
    acc *= (pm - detail::sat_pow(mod.p(), i));
    if (acc > cap) return std::int64_t{1} << 62;
  }
  return static_cast<std::int64_t>(acc);
}

// Every valid free descriptor at (p, k, m, g): all surjective m x 2g
// monodromy matrices, in lexicographic entry order.
inline std::vector<MatZ> all_surjective_theta(const Modulus& mod, int m, int g,
                                              std::int64_t budget = kDefaultBudget) {
  const std::int64_t cells = static_cast<std::int64_t>(m) * 2 * g;
  if (detail::sat_pow(mod.pk(), cells) > budget)
    fail(errc::budget_exceeded, "descriptor enumeration above candidate budget");
  std::vector<MatZ> out;
  Vec flat(cells, 0);
  do {
    MatZ M(m, 2 * g, mod);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < 2 * g; ++j) M.set(i, j, flat[i * 2 * g + j]);
    if (rank_mod_p(M) == m) out.push_back(std::move(M));
  } while (detail::next_vec(flat, mod.pk()));
  return out;
}

struct OrbitPartition {
  std::vector<ActionDescriptor> elements;  // all free descriptors, fixed (p,k,m,g)
  std::vector<std::vector<int>> classes;   // index sets, each sorted, by least member
  EquivMode mode;
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

// Strong classes: orbits of M -> M S over the symplectic group. Weak
// classes: orbits under Aut(G) x Sp, closed by applying the two factor
// subgroups separately (they generate the product).
inline OrbitPartition orbit_partition(const Modulus& mod, int m, int g, EquivMode mode,
                                      std::int64_t budget = kDefaultBudget) {
  std::vector<MatZ> thetas = all_surjective_theta(mod, m, g, budget);
  std::vector<MatZ> sp = enumerate_sp(g, mod, budget);
  std::vector<MatZ> aut;
  if (mode == EquivMode::weak) aut = enumerate_aut(m, mod, budget);

  std::map<std::vector<std::int64_t>, int> index;
  auto key = [](const MatZ& M) {
    std::vector<std::int64_t> k;
    k.reserve(static_cast<std::size_t>(M.rows()) * M.cols());
    for (int i = 0; i < M.rows(); ++i)
      for (int j = 0; j < M.cols(); ++j) k.push_back(M.at(i, j));
    return k;
  };
  for (std::size_t i = 0; i < thetas.size(); ++i) index[key(thetas[i])] = static_cast<int>(i);

  detail::UnionFind uf(static_cast<int>(thetas.size()));
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (const MatZ& S : sp) uf.join(static_cast<int>(i), index.at(key(mat_mul(thetas[i], S))));
    if (mode == EquivMode::weak)
      for (const MatZ& a : aut) uf.join(static_cast<int>(i), index.at(key(mat_mul(a, thetas[i]))));
  }

  std::map<int, std::vector<int>> grouped;
  for (std::size_t i = 0; i < thetas.size(); ++i)
    grouped[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));
  OrbitPartition part{{}, {}, mode};
  part.elements.reserve(thetas.size());
  for (const MatZ& M : thetas)
    part.elements.push_back(ActionDescriptor{mod, m, g, M, {}});
  std::map<int, std::vector<int>> by_least;
  for (auto& [root, members] : grouped) by_least[members.front()] = std::move(members);
  for (auto& [least, members] : by_least) part.classes.push_back(std::move(members));
  return part;
}

// Partition of the same descriptors by invariant equality: covering genus
// plus entrywise gram for strong, covering genus plus q for weak. Classes
// are normalized exactly like orbit_partition's, so agreement is plain
// equality of the two index-set lists.
inline std::vector<std::vector<int>> invariant_partition(
    const std::vector<ActionDescriptor>& elements, EquivMode mode) {
  std::map<std::string, std::vector<int>> grouped;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const ActionDescriptor& A = elements[i];
    std::string key = std::to_string(covering_genus(A)) + "|";
    AlternatingForm F = induced_form(A);
    if (mode == EquivMode::strong) {
      key += F.gram.str();
    } else {
      for (int qi : q_invariant(F)) key += std::to_string(qi) + ",";
    }
    grouped[key].push_back(static_cast<int>(i));
  }
  std::map<int, std::vector<int>> by_least;
  for (auto& [key, members] : grouped) by_least[members.front()] = std::move(members);
  std::vector<std::vector<int>> classes;
  classes.reserve(by_least.size());
  for (auto& [least, members] : by_least) classes.push_back(std::move(members));
  return classes;
}

// q computed from its definition: for each i, generators of the kernel of
// the gram matrix mod p^i, pushed through mu, then a plain rank over Z_p.
// No normal form anywhere on this path.
inline QTuple q_by_definition(const AlternatingForm& F) {
  const Modulus& mod = F.mod;
  QTuple q(mod.k());
  Modulus fp(mod.p(), 1);
  for (int i = 1; i <= mod.k(); ++i) {
    std::vector<Vec> gens = kernel_mod(F.gram, i);
    MatZ B(F.m, static_cast<int>(gens.size()), fp);
    for (std::size_t j = 0; j < gens.size(); ++j) {
      Vec img = mu_map(gens[j], mod);
      for (int r = 0; r < F.m; ++r) B.set(r, static_cast<int>(j), img[r]);
    }
    q[i - 1] = rank_mod_p(B);
  }
  return q;
}

// Theorem-2-style extension check: every form-preserving isomorphism
// between free rank-m subgroups of Z_{p^k}^{2g} must be the restriction of
// some symplectic automorphism. Free basis tuples are enumerated as m x 2g
// matrices of full rank mod p.
inline bool check_extension_property(int g, const Modulus& mod, int m,
                                     std::int64_t budget = kDefaultBudget) {
  const int n = 2 * g;
  const std::int64_t tuples = detail::sat_pow(mod.pk(), static_cast<std::int64_t>(n) * m);
  if (detail::sat_pow(tuples, 2) > budget)
    fail(errc::budget_exceeded, "extension-property search above candidate budget");
  MatZ J = intersection_gram(g, mod);
  std::vector<MatZ> sp = enumerate_sp(g, mod, budget);

  // collect free basis tuples (rows are the basis vectors)
  std::vector<MatZ> frees;
  Vec flat(static_cast<std::size_t>(n) * m, 0);
  do {
    MatZ V(m, n, mod);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) V.set(i, j, flat[i * n + j]);
    if (rank_mod_p(V) == m) frees.push_back(std::move(V));
  } while (detail::next_vec(flat, mod.pk()));

  for (const MatZ& V : frees) {
    MatZ gv = mat_mul(mat_mul(V, J), V.transpose());
    for (const MatZ& W : frees) {
      MatZ gw = mat_mul(mat_mul(W, J), W.transpose());
      if (gv != gw) continue;  // v_i -> w_i is not form-preserving
      bool extended = false;
      for (const MatZ& S : sp) {
        // S applied to each basis vector: rows V S^T
        if (mat_mul(V, S.transpose()) == W) { extended = true; break; }
      }
      if (!extended) return false;
    }
  }
  return true;
}

}  // namespace surfact
