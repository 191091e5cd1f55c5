#pragma once

// Exact arithmetic in Z_{p^k} = Z/p^k Z for a prime p.
//
// Everything is a plain value type. A Modulus is validated at construction:
// p prime (trial division; inputs are small) and p^k < 2^31, so that the
// product of two reduced values always fits in int64_t. The valuation of a
// residue is the exponent of p dividing its representative, with
// valuation(0) = k so the codomain stays finite.

#include <cstdint>
#include <string>
#include <vector>

#include "surfact/error.hpp"

namespace surfact {

// Largest modulus we accept; keeps (pk-1)^2 well inside int64_t.
inline constexpr std::int64_t kMaxModulus = std::int64_t{1} << 31;

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

class Modulus {
public:
  Modulus(std::int64_t p, int k) : p_(p), k_(k) {
    if (!is_prime(p)) fail(errc::bad_modulus, "p = " + std::to_string(p) + " is not prime");
    if (k < 1) fail(errc::bad_modulus, "k must be >= 1");
    pk_ = 1;
    for (int i = 0; i < k; ++i) {
      pk_ *= p;
      if (pk_ >= kMaxModulus)
        fail(errc::bad_modulus, "p^k exceeds the 2^31 word-size budget");
    }
  }

  std::int64_t p() const { return p_; }
  int k() const { return k_; }
  std::int64_t pk() const { return pk_; }

  std::int64_t reduce(std::int64_t v) const {
    v %= pk_;
    return v < 0 ? v + pk_ : v;
  }

  // Exponent of p in v, capped at k; k for v == 0.
  int valuation(std::int64_t v) const {
    v = reduce(v);
    if (v == 0) return k_;
    int t = 0;
    while (v % p_ == 0) {
      v /= p_;
      ++t;
    }
    return t;
  }

  bool is_unit(std::int64_t v) const { return reduce(v) % p_ != 0; }

  // Inverse of a unit via extended Euclid.
  std::int64_t unit_inverse(std::int64_t v) const {
    v = reduce(v);
    if (v % p_ == 0) fail(errc::not_a_unit, std::to_string(v) + " mod " + std::to_string(pk_));
    std::int64_t r0 = pk_, r1 = v, s0 = 0, s1 = 1;
    while (r1 != 0) {
      std::int64_t q = r0 / r1;
      std::int64_t r2 = r0 - q * r1, s2 = s0 - q * s1;
      r0 = r1; r1 = r2;
      s0 = s1; s1 = s2;
    }
    return reduce(s0);
  }

  friend bool operator==(const Modulus& a, const Modulus& b) {
    return a.p_ == b.p_ && a.k_ == b.k_;
  }
  friend bool operator!=(const Modulus& a, const Modulus& b) { return !(a == b); }

  std::string str() const { return std::to_string(p_) + "^" + std::to_string(k_); }

private:
  std::int64_t p_;
  int k_;
  std::int64_t pk_;
};

class Residue {
public:
  Residue(std::int64_t value, Modulus mod) : mod_(mod), value_(mod.reduce(value)) {}

  std::int64_t value() const { return value_; }
  const Modulus& modulus() const { return mod_; }

  bool is_zero() const { return value_ == 0; }
  bool is_unit() const { return mod_.is_unit(value_); }
  int valuation() const { return mod_.valuation(value_); }

  Residue inverse() const { return Residue(mod_.unit_inverse(value_), mod_); }

  friend Residue operator+(const Residue& a, const Residue& b) {
    check_same(a, b);
    return Residue(a.value_ + b.value_, a.mod_);
  }
  friend Residue operator-(const Residue& a, const Residue& b) {
    check_same(a, b);
    return Residue(a.value_ - b.value_, a.mod_);
  }
  friend Residue operator*(const Residue& a, const Residue& b) {
    check_same(a, b);
    return Residue(a.value_ * b.value_, a.mod_);
  }
  Residue operator-() const { return Residue(-value_, mod_); }

  friend bool operator==(const Residue& a, const Residue& b) {
    return a.mod_ == b.mod_ && a.value_ == b.value_;
  }
  friend bool operator!=(const Residue& a, const Residue& b) { return !(a == b); }

private:
  static void check_same(const Residue& a, const Residue& b) {
    if (a.mod_ != b.mod_)
      fail(errc::modulus_mismatch, a.mod_.str() + " vs " + b.mod_.str());
  }

  Modulus mod_;
  std::int64_t value_;
};

// Group elements of Z_{p^k}^m are plain coordinate vectors, reduced into
// [0, p^k) by the operations that produce them.
using Vec = std::vector<std::int64_t>;

// The epimorphism v -> p^{k-1} v onto the Z_p-vector space p^{k-1}Z_{p^k}^m,
// written in the usual identification p^{k-1}u <-> u mod p: componentwise
// reduction mod p.
inline Vec mu_map(const Vec& v, const Modulus& mod) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::int64_t r = mod.reduce(v[i]) % mod.p();
    out[i] = r;
  }
  return out;
}

}  // namespace surfact
