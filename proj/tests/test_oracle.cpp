#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "surfact/oracle.hpp"
#include "test_util.hpp"

using namespace surfact;

namespace {

// q straight from the definition with the kernel enumerated vector by
// vector: no Smith normal form, no generating sets.
QTuple brute_q(const AlternatingForm& F) {
  const Modulus& mod = F.mod;
  Modulus fp(mod.p(), 1);
  QTuple q(mod.k());
  for (int i = 1; i <= mod.k(); ++i) {
    std::set<Vec> kernel = testutil::brute_kernel(F.gram, i);
    MatZ B(F.m, static_cast<int>(kernel.size()), fp);
    int col = 0;
    for (const Vec& h : kernel) {
      Vec img = mu_map(h, mod);
      for (int r = 0; r < F.m; ++r) B.set(r, col, img[r]);
      ++col;
    }
    q[i - 1] = rank_mod_p(B);
  }
  return q;
}

std::string mat_key(const MatZ& M) { return M.str(); }

// Weak orbits by applying every (alpha, S) pair, not the two factor
// subgroups separately.
std::vector<std::vector<int>> weak_orbits_full_pairs(const Modulus& mod, int m, int g) {
  std::vector<MatZ> thetas = all_surjective_theta(mod, m, g);
  std::vector<MatZ> sp = enumerate_sp(g, mod);
  std::vector<MatZ> aut = enumerate_aut(m, mod);
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < thetas.size(); ++i) index[mat_key(thetas[i])] = static_cast<int>(i);
  std::vector<int> root(thetas.size());
  for (std::size_t i = 0; i < root.size(); ++i) root[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (std::size_t i = 0; i < thetas.size(); ++i)
    for (const MatZ& a : aut)
      for (const MatZ& S : sp) {
        int j = index.at(mat_key(mat_mul(mat_mul(a, thetas[i]), S)));
        root[find(static_cast<int>(i))] = find(j);
      }
  std::map<int, std::vector<int>> grouped;
  for (std::size_t i = 0; i < thetas.size(); ++i)
    grouped[find(static_cast<int>(i))].push_back(static_cast<int>(i));
  std::map<int, std::vector<int>> by_least;
  for (auto& [r, members] : grouped) by_least[members.front()] = std::move(members);
  std::vector<std::vector<int>> classes;
  for (auto& [least, members] : by_least) classes.push_back(std::move(members));
  return classes;
}

}  // namespace

TEST_CASE("symplectic group enumeration") {
  CHECK(enumerate_sp(1, Modulus(2, 1)).size() == 6);
  CHECK(enumerate_sp(1, Modulus(3, 1)).size() == 24);
  CHECK(enumerate_sp(1, Modulus(2, 2)).size() == 48);
  SECTION("every element preserves the form, and spot-checked group axioms") {
    std::mt19937_64 rng(3301);
    for (auto [p, k] : {std::pair<std::int64_t, int>{3, 1}, {2, 2}}) {
      Modulus mod(p, k);
      std::vector<MatZ> sp = enumerate_sp(1, mod);
      MatZ J = intersection_gram(1, mod);
      std::set<std::string> keys;
      for (const MatZ& S : sp) {
        CHECK(mat_mul(mat_mul(S.transpose(), J), S) == J);
        keys.insert(mat_key(S));
      }
      CHECK(keys.size() == sp.size());
      for (int trial = 0; trial < 30; ++trial) {
        const MatZ& a = sp[rng() % sp.size()];
        const MatZ& b = sp[rng() % sp.size()];
        CHECK(keys.count(mat_key(mat_mul(a, b))) == 1);
        CHECK(keys.count(mat_key(inverse(a))) == 1);
      }
    }
  }
  SECTION("budget guard") {
    CHECK_THROWS_AS(enumerate_sp(2, Modulus(3, 1), 1000), Error);
  }
}

TEST_CASE("automorphism group enumeration") {
  CHECK(enumerate_aut(2, Modulus(2, 1)).size() == 6);
  CHECK(enumerate_aut(2, Modulus(2, 2)).size() == 96);
  SECTION("m = 1 gives the unit group") {
    for (auto [p, k] : {std::pair<std::int64_t, int>{2, 3}, {3, 2}, {7, 1}}) {
      Modulus mod(p, k);
      std::size_t euler = static_cast<std::size_t>(mod.pk() / p * (p - 1));
      CHECK(enumerate_aut(1, mod).size() == euler);
    }
  }
  SECTION("group order formula matches enumeration") {
    for (auto [m, p, k] : {std::tuple<int, std::int64_t, int>{1, 2, 2}, {2, 2, 1},
                           {2, 3, 1}, {2, 2, 2}, {3, 2, 1}}) {
      Modulus mod(p, k);
      CHECK(aut_group_order(m, mod) == static_cast<std::int64_t>(enumerate_aut(m, mod).size()));
    }
  }
  SECTION("every element is unimodular") {
    for (const MatZ& a : enumerate_aut(2, Modulus(2, 2))) CHECK(is_unimodular(a));
  }
  SECTION("budget guard") {
    CHECK_THROWS_AS(enumerate_aut(3, Modulus(5, 2), 1000), Error);
  }
}

TEST_CASE("orbit partitions at tiny parameters") {
  SECTION("(2,1,1,1): one strong class of three descriptors") {
    OrbitPartition part = orbit_partition(Modulus(2, 1), 1, 1, EquivMode::strong);
    CHECK(part.elements.size() == 3);
    CHECK(part.classes.size() == 1);
  }
  SECTION("(2,1,2,1): all six invertible matrices in one class") {
    OrbitPartition part = orbit_partition(Modulus(2, 1), 2, 1, EquivMode::strong);
    CHECK(part.elements.size() == 6);
    CHECK(part.classes.size() == 1);
  }
  SECTION("(3,1,2,1): two strong classes merge into one weak class") {
    OrbitPartition strong = orbit_partition(Modulus(3, 1), 2, 1, EquivMode::strong);
    CHECK(strong.elements.size() == 48);
    CHECK(strong.classes.size() == 2);
    OrbitPartition weak = orbit_partition(Modulus(3, 1), 2, 1, EquivMode::weak);
    CHECK(weak.classes.size() == 1);
  }
  SECTION("classes partition the elements") {
    OrbitPartition part = orbit_partition(Modulus(2, 2), 1, 1, EquivMode::weak);
    std::set<int> seen;
    std::size_t total = 0;
    for (const auto& cls : part.classes) {
      total += cls.size();
      for (int i : cls) CHECK(seen.insert(i).second);
    }
    CHECK(total == part.elements.size());
  }
  SECTION("factor-subgroup closure equals full pair application") {
    for (auto [p, m] : {std::pair<std::int64_t, int>{2, 1}, {3, 2}}) {
      Modulus mod(p, 1);
      CHECK(orbit_partition(mod, m, 1, EquivMode::weak).classes ==
            weak_orbits_full_pairs(mod, m, 1));
    }
  }
  SECTION("budget guard") {
    CHECK_THROWS_AS(orbit_partition(Modulus(5, 2), 2, 2, EquivMode::strong, 1000), Error);
  }
}

TEST_CASE("q by definition") {
  SECTION("worked examples") {
    for (std::int64_t p : {2, 3, 5}) {
      AlternatingForm J = validate_alternating(intersection_gram(1, Modulus(p, 1)));
      CHECK(q_by_definition(J) == QTuple{0});
    }
    Modulus z4(2, 2);
    AlternatingForm F = validate_alternating(MatZ::from_rows({{0, 2}, {-2, 0}}, z4));
    CHECK(q_by_definition(F) == QTuple{2, 0});
    AlternatingForm Z = validate_alternating(MatZ(3, 3, Modulus(3, 2)));
    CHECK(q_by_definition(Z) == QTuple{3, 3});
  }
  SECTION("agrees with vector-by-vector kernel enumeration, exhaustively") {
    for (auto [p, k] : {std::pair<std::int64_t, int>{2, 1}, {3, 1}, {2, 2}}) {
      Modulus mod(p, k);
      for (int m = 1; m <= 3; ++m) {
        std::vector<std::int64_t> tri(static_cast<std::size_t>(m) * (m - 1) / 2, 0);
        for (;;) {
          MatZ Q(m, m, mod);
          int idx = 0;
          for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
              Q.set(i, j, tri[idx]);
              Q.set(j, i, -tri[idx]);
              ++idx;
            }
          AlternatingForm F = validate_alternating(Q);
          QTuple expected = brute_q(F);
          CHECK(q_by_definition(F) == expected);
          CHECK(q_invariant(F) == expected);
          int t = static_cast<int>(tri.size()) - 1;
          while (t >= 0 && ++tri[t] == mod.pk()) tri[t--] = 0;
          if (t < 0) break;
        }
        if (m == 1) continue;  // the single zero form was just checked
      }
    }
  }
}

TEST_CASE("extension property of form-preserving isomorphisms") {
  CHECK(check_extension_property(1, Modulus(2, 1), 1));
  CHECK(check_extension_property(1, Modulus(3, 1), 1));
  CHECK(check_extension_property(1, Modulus(2, 2), 1));
  SECTION("budget guard") {
    CHECK_THROWS_AS(check_extension_property(2, Modulus(3, 2), 2, 1000), Error);
  }
}
