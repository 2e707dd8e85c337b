#include "stabex/ring.hpp"

namespace stabex {

int64_t gcd64(int64_t a, int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int64_t xgcd(int64_t a, int64_t b, int64_t& s, int64_t& t) {
  int64_t old_r = a, r = b;
  int64_t old_s = 1, s1 = 0;
  int64_t old_t = 0, t1 = 1;
  while (r != 0) {
    int64_t q = old_r / r;
    int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s1;
    old_s = s1;
    s1 = tmp;
    tmp = old_t - q * t1;
    old_t = t1;
    t1 = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  s = old_s;
  t = old_t;
  return old_r;
}

bool RingSpec::is_unit(uint32_t a) const { return gcd64(a, modulus) == 1; }

uint32_t RingSpec::inv(uint32_t a) const {
  int64_t s, t;
  int64_t g = xgcd(a, modulus, s, t);
  if (g != 1) throw std::domain_error("RingSpec::inv: not a unit");
  return reduce(s);
}

bool RingSpec::squarefree() const {
  uint32_t n = modulus;
  for (uint32_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      n /= p;
      if (n % p == 0) return false;
    }
  }
  return true;
}

uint32_t unit_lift(uint32_t a, uint32_t n) {
  if (a == 0) return 1;
  uint32_t d = static_cast<uint32_t>(gcd64(a, n));
  // Desk-scale moduli: scan for a unit u with u*a == d.
  for (uint32_t u = 1; u < n; ++u) {
    if (gcd64(u, n) != 1) continue;
    if ((static_cast<uint64_t>(u) * a) % n == d) return u;
  }
  throw std::logic_error("unit_lift: no unit found");
}

}  // namespace stabex
