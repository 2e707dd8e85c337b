#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stabex {

/// Arithmetic over Z/n. All residues are kept canonical in [0, n).
struct RingSpec {
  uint32_t modulus = 2;

  explicit RingSpec(uint32_t n) : modulus(n) {
    if (n < 2) throw std::invalid_argument("RingSpec: modulus must be >= 2");
  }

  uint32_t reduce(int64_t x) const {
    int64_t r = x % static_cast<int64_t>(modulus);
    if (r < 0) r += modulus;
    return static_cast<uint32_t>(r);
  }
  uint32_t add(uint32_t a, uint32_t b) const { return (a + b) % modulus; }
  uint32_t sub(uint32_t a, uint32_t b) const { return (a + modulus - b) % modulus; }
  uint32_t neg(uint32_t a) const { return a == 0 ? 0 : modulus - a; }
  uint32_t mul(uint32_t a, uint32_t b) const {
    return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % modulus);
  }
  bool is_unit(uint32_t a) const;
  /// Multiplicative inverse of a unit; throws on non-units.
  uint32_t inv(uint32_t a) const;

  bool squarefree() const;
  std::string str() const { return "Z/" + std::to_string(modulus); }
};

/// gcd(a, b) together with Bezout coefficients: s*a + t*b == g.
int64_t xgcd(int64_t a, int64_t b, int64_t& s, int64_t& t);
int64_t gcd64(int64_t a, int64_t b);

/// A unit u mod n with u*a == gcd(a, n) (mod n). a may be 0 (returns 1).
uint32_t unit_lift(uint32_t a, uint32_t n);

}  // namespace stabex
