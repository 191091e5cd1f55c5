#include <catch2/catch_amalgamated.hpp>

#include "surfact/residue.hpp"

using namespace surfact;

TEST_CASE("modulus construction validates p and k") {
  CHECK_NOTHROW(Modulus(2, 1));
  CHECK_NOTHROW(Modulus(7919, 2));
  CHECK_THROWS_AS(Modulus(1, 1), Error);
  CHECK_THROWS_AS(Modulus(4, 1), Error);
  CHECK_THROWS_AS(Modulus(-3, 1), Error);
  CHECK_THROWS_AS(Modulus(2, 0), Error);
  CHECK_THROWS_AS(Modulus(2, 31), Error);  // 2^31 hits the word-size budget
  CHECK(Modulus(2, 30).pk() == (1 << 30));
}

TEST_CASE("ring arithmetic reduces into [0, p^k)") {
  Modulus z4(2, 2);
  CHECK((Residue(3, z4) + Residue(3, z4)).value() == 2);
  CHECK((Residue(2, z4) * Residue(2, z4)).value() == 0);  // zero divisor
  CHECK((-Residue(0, Modulus(3, 2))).value() == 0);
  CHECK((Residue(1, z4) - Residue(3, z4)).value() == 2);
  CHECK_THROWS_AS(Residue(1, z4) + Residue(1, Modulus(3, 1)), Error);
}

TEST_CASE("valuation with the zero convention") {
  Modulus z8(2, 3);
  CHECK(Residue(0, z8).valuation() == 3);
  CHECK(Residue(6, z8).valuation() == 1);
  CHECK(Residue(4, z8).valuation() == 2);
  CHECK(Residue(5, z8).valuation() == 0);
}

TEST_CASE("valuation divides exactly, exhaustively for small moduli") {
  for (auto [p, k] : {std::pair<std::int64_t, int>{2, 9}, {3, 5}, {5, 3}, {7, 3}, {11, 2}}) {
    Modulus mod(p, k);
    for (std::int64_t v = 1; v < mod.pk(); ++v) {
      int t = mod.valuation(v);
      std::int64_t pt = 1;
      for (int i = 0; i < t; ++i) pt *= p;
      CHECK(v % pt == 0);
      CHECK((t == k || v % (pt * p) != 0));
    }
  }
}

TEST_CASE("unit inverses") {
  CHECK(Residue(3, Modulus(2, 2)).inverse().value() == 3);
  SECTION("5 in Z_9 against brute force") {
    Modulus z9(3, 2);
    std::int64_t expected = -1;
    for (std::int64_t c = 0; c < 9; ++c)
      if ((5 * c) % 9 == 1) expected = c;
    REQUIRE(expected == 2);
    CHECK(Residue(5, z9).inverse().value() == expected);
  }
  CHECK_THROWS_AS(Residue(2, Modulus(2, 2)).inverse(), Error);
  SECTION("error carries NotAUnit") {
    try {
      Residue(2, Modulus(2, 2)).inverse();
      FAIL("expected a throw");
    } catch (const Error& e) {
      CHECK(e.code() == errc::not_a_unit);
    }
  }
}

TEST_CASE("all units invert, exhaustively for p^k <= 512") {
  for (auto [p, k] : {std::pair<std::int64_t, int>{2, 9}, {3, 5}, {5, 3}, {7, 3}, {13, 2}}) {
    Modulus mod(p, k);
    for (std::int64_t v = 0; v < mod.pk(); ++v) {
      Residue x(v, mod);
      if (x.is_unit()) {
        CHECK((x * x.inverse()).value() == 1);
      } else {
        CHECK_THROWS_AS(x.inverse(), Error);
      }
    }
  }
}

TEST_CASE("mu map") {
  Modulus z4(2, 2);
  CHECK(mu_map({1, 3}, z4) == Vec{1, 1});
  CHECK(mu_map({2, 0}, z4) == Vec{0, 0});
  SECTION("k = 1 leaves vectors unchanged") {
    Modulus z5(5, 1);
    CHECK(mu_map({0, 3, 4}, z5) == Vec{0, 3, 4});
  }
}

TEST_CASE("mu map is a homomorphism, exhaustively over Z_4^2 and Z_9^1") {
  Modulus z4(2, 2);
  for (std::int64_t a0 = 0; a0 < 4; ++a0)
    for (std::int64_t a1 = 0; a1 < 4; ++a1)
      for (std::int64_t b0 = 0; b0 < 4; ++b0)
        for (std::int64_t b1 = 0; b1 < 4; ++b1) {
          Vec sum{z4.reduce(a0 + b0), z4.reduce(a1 + b1)};
          Vec lhs = mu_map(sum, z4);
          Vec ma = mu_map({a0, a1}, z4), mb = mu_map({b0, b1}, z4);
          Vec rhs{(ma[0] + mb[0]) % 2, (ma[1] + mb[1]) % 2};
          CHECK(lhs == rhs);
        }
  Modulus z9(3, 2);
  for (std::int64_t a = 0; a < 9; ++a)
    for (std::int64_t b = 0; b < 9; ++b) {
      Vec lhs = mu_map({z9.reduce(a + b)}, z9);
      CHECK(lhs[0] == (mu_map({a}, z9)[0] + mu_map({b}, z9)[0]) % 3);
    }
}
