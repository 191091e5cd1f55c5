#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "surfact/matmod.hpp"
#include "test_util.hpp"

using namespace surfact;

namespace {

MatZ diag_of(const SmithDecomposition& snf, int rows, int cols, const Modulus& mod) {
  MatZ D(rows, cols, mod);
  for (std::size_t i = 0; i < snf.divisor_exponents.size(); ++i) {
    std::int64_t pe = 1;
    for (int t = 0; t < snf.divisor_exponents[i]; ++t) pe *= mod.p();
    D.set(static_cast<int>(i), static_cast<int>(i), pe);
  }
  return D;
}

}  // namespace

TEST_CASE("matrix product") {
  Modulus z4(2, 2);
  MatZ J = MatZ::from_rows({{0, 1}, {-1, 0}}, z4);
  CHECK(mat_mul(J, J) == MatZ::from_rows({{3, 0}, {0, 3}}, z4));
  MatZ A = MatZ::from_rows({{1, 2}, {3, 0}}, z4);
  CHECK(mat_mul(MatZ::identity(2, z4), A) == A);
  MatZ r = MatZ::from_rows({{1, 2}}, z4);
  MatZ c = MatZ::from_rows({{3}, {3}}, z4);
  CHECK(mat_mul(r, c) == MatZ::from_rows({{1}}, z4));  // 3 + 6 = 9 = 1 mod 4
  CHECK_THROWS_AS(mat_mul(r, r), Error);
  CHECK_THROWS_AS(mat_mul(r, MatZ::identity(2, Modulus(3, 1))), Error);
}

TEST_CASE("rank over the residue field") {
  Modulus z4(2, 2);
  CHECK(rank_mod_p(MatZ::from_rows({{2, 1}}, z4)) == 1);
  CHECK(rank_mod_p(MatZ::from_rows({{2, 0}}, z4)) == 0);
  for (int m = 1; m <= 4; ++m) CHECK(rank_mod_p(MatZ::identity(m, Modulus(5, 2))) == m);
}

TEST_CASE("smith normal form on the worked examples") {
  Modulus z4(2, 2);
  SECTION("unit pivot wins over smaller entries") {
    MatZ A = MatZ::from_rows({{2, 1}, {0, 2}}, z4);
    SmithDecomposition snf = smith_normal_form(A);
    CHECK(snf.divisor_exponents == std::vector<int>{0, 2});
    CHECK(mat_mul(mat_mul(snf.U, A), snf.V) == diag_of(snf, 2, 2, z4));
  }
  SECTION("zero matrix") {
    MatZ Z(2, 3, z4);
    CHECK(smith_normal_form(Z).divisor_exponents == std::vector<int>{2, 2});
  }
  SECTION("identity") {
    CHECK(smith_normal_form(MatZ::identity(3, z4)).divisor_exponents ==
          std::vector<int>{0, 0, 0});
  }
}

TEST_CASE("smith normal form round trip on a random corpus") {
  std::mt19937_64 rng(7001);
  for (auto [p, k] : {std::pair<std::int64_t, int>{2, 1}, {2, 3}, {3, 2}, {5, 3}}) {
    Modulus mod(p, k);
    for (int trial = 0; trial < 60; ++trial) {
      int rows = static_cast<int>(rng() % 5);
      int cols = static_cast<int>(rng() % 5);
      MatZ A = testutil::random_mat(rng, rows, cols, mod);
      SmithDecomposition snf = smith_normal_form(A);
      REQUIRE(static_cast<int>(snf.divisor_exponents.size()) == std::min(rows, cols));
      CHECK(std::is_sorted(snf.divisor_exponents.begin(), snf.divisor_exponents.end()));
      if (rows > 0) CHECK(is_unimodular(snf.U));
      if (cols > 0) CHECK(is_unimodular(snf.V));
      CHECK(mat_mul(mat_mul(snf.U, A), snf.V) == diag_of(snf, rows, cols, mod));
      CHECK(rank_mod_p(A) == static_cast<int>(std::count(snf.divisor_exponents.begin(),
                                                         snf.divisor_exponents.end(), 0)));
    }
  }
}

TEST_CASE("divisor exponents are invariant under unimodular sandwiching") {
  std::mt19937_64 rng(7002);
  for (auto [p, k] : {std::pair<std::int64_t, int>{2, 2}, {3, 3}}) {
    Modulus mod(p, k);
    for (int trial = 0; trial < 40; ++trial) {
      int rows = 1 + static_cast<int>(rng() % 4);
      int cols = 1 + static_cast<int>(rng() % 4);
      MatZ A = testutil::random_mat(rng, rows, cols, mod);
      MatZ P = testutil::random_unimodular(rng, rows, mod);
      MatZ Q = testutil::random_unimodular(rng, cols, mod);
      CHECK(smith_normal_form(mat_mul(mat_mul(P, A), Q)).divisor_exponents ==
            smith_normal_form(A).divisor_exponents);
    }
  }
}

TEST_CASE("kernel generators match brute-force enumeration") {
  SECTION("worked examples over Z_4") {
    Modulus z4(2, 2);
    MatZ A = MatZ::from_rows({{0, 2}, {2, 0}}, z4);
    auto all = testutil::span_of(kernel_mod(A, 1), z4, 2);
    CHECK(all.size() == 16);  // 2h == 0 mod 2 always
    auto halved = testutil::span_of(kernel_mod(A, 2), z4, 2);
    CHECK(halved == testutil::brute_kernel(A, 2));
    CHECK(halved.size() == 4);  // 2Z_4 x 2Z_4
    MatZ I = MatZ::identity(2, z4);
    CHECK(testutil::span_of(kernel_mod(I, 1), z4, 2) == testutil::brute_kernel(I, 1));
    CHECK(testutil::span_of(kernel_mod(I, 2), z4, 2).size() == 1);
  }
  SECTION("exhaustive 2x2 corpora, p^k <= 4") {
    for (auto [p, k] : {std::pair<std::int64_t, int>{2, 1}, {3, 1}, {2, 2}}) {
      Modulus mod(p, k);
      std::vector<std::int64_t> e(4, 0);
      do {
        MatZ A = MatZ::from_rows({{e[0], e[1]}, {e[2], e[3]}}, mod);
        for (int i = 1; i <= k; ++i)
          CHECK(testutil::span_of(kernel_mod(A, i), mod, 2) == testutil::brute_kernel(A, i));
        int j = 3;
        while (j >= 0 && ++e[j] == mod.pk()) e[j--] = 0;
        if (j < 0) break;
      } while (true);
    }
  }
  SECTION("random rectangular corpora, p^k <= 9") {
    std::mt19937_64 rng(7003);
    for (auto [p, k] : {std::pair<std::int64_t, int>{5, 1}, {7, 1}, {2, 3}, {3, 2}}) {
      Modulus mod(p, k);
      for (int trial = 0; trial < 30; ++trial) {
        int rows = 1 + static_cast<int>(rng() % 3);
        int cols = 1 + static_cast<int>(rng() % 3);
        MatZ A = testutil::random_mat(rng, rows, cols, mod);
        for (int i = 1; i <= k; ++i)
          CHECK(testutil::span_of(kernel_mod(A, i), mod, cols) == testutil::brute_kernel(A, i));
      }
    }
  }
}

TEST_CASE("unimodularity test") {
  Modulus z4(2, 2);
  CHECK(is_unimodular(MatZ::from_rows({{1, 1}, {0, 1}}, z4)));
  CHECK_FALSE(is_unimodular(MatZ::from_rows({{2, 1}, {0, 2}}, z4)));
  CHECK(is_unimodular(MatZ::from_rows({{3}}, z4)));
  CHECK_FALSE(is_unimodular(MatZ::from_rows({{2}}, z4)));
  CHECK_THROWS_AS(is_unimodular(MatZ(2, 3, z4)), Error);
}

TEST_CASE("inverse of unimodular matrices") {
  std::mt19937_64 rng(7004);
  for (auto [p, k] : {std::pair<std::int64_t, int>{2, 1}, {2, 2}, {3, 2}, {5, 1}}) {
    Modulus mod(p, k);
    for (int trial = 0; trial < 25; ++trial) {
      int n = 1 + static_cast<int>(rng() % 4);
      MatZ A = testutil::random_unimodular(rng, n, mod);
      CHECK(mat_mul(A, inverse(A)) == MatZ::identity(n, mod));
      CHECK(mat_mul(inverse(A), A) == MatZ::identity(n, mod));
    }
  }
  CHECK_THROWS_AS(inverse(MatZ::from_rows({{2, 0}, {0, 1}}, Modulus(2, 2))), Error);
}
