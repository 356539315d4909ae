#pragma once

// Word-sized modular arithmetic: products, powers, inverses, Jacobi symbols
// and square roots modulo odd primes. Moduli must stay below 2^63.

#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace socialist {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

/// Value of a Legendre or Jacobi symbol: -1, 0 or +1.
enum class Symbol : int { minus = -1, zero = 0, plus = 1 };

constexpr int to_int(Symbol s) noexcept { return static_cast<int>(s); }

/// (a * b) mod m through a 128-bit intermediate.
constexpr u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
  assert(a < m && b < m);
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 add_mod(u64 a, u64 b, u64 m) noexcept {
  // m < 2^63 so a + b cannot wrap
  const u64 s = a + b;
  return s >= m ? s - m : s;
}

constexpr u64 sub_mod(u64 a, u64 b, u64 m) noexcept {
  return a >= b ? a - b : a + (m - b);
}

constexpr u64 neg_mod(u64 a, u64 m) noexcept { return a == 0 ? 0 : m - a; }

/// Reduces a signed integer into [0, m).
constexpr u64 reduce(i64 a, u64 m) noexcept {
  if (a >= 0) return static_cast<u64>(a) % m;
  // -(a+1) avoids overflow on INT64_MIN
  const u64 r = (static_cast<u64>(-(a + 1)) % m);
  return r == m - 1 ? 0 : m - 1 - r;
}

constexpr u64 pow_mod(u64 base, u64 exp, u64 m) noexcept {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

/// Inverse of a modulo the prime p, via the extended Euclidean algorithm.
/// Throws std::domain_error when a == 0 mod p.
constexpr u64 inv_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) throw std::domain_error("inv_mod: zero has no inverse");
  i64 t0 = 0, t1 = 1;
  u64 r0 = p, r1 = a;
  while (r1 != 0) {
    const u64 q = r0 / r1;
    const u64 r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    const i64 t2 = t0 - static_cast<i64>(q) * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0 != 1) throw std::domain_error("inv_mod: operand not invertible");
  return reduce(t0, p);
}

/// Jacobi symbol (a/n) for odd n >= 3 by binary quadratic reciprocity.
/// Negative a is reduced mod n first.
constexpr Symbol jacobi(i64 a, u64 n) noexcept {
  assert(n >= 3 && (n & 1U) == 1U);
  u64 x = reduce(a, n);
  int sign = 1;
  while (x != 0) {
    while ((x & 1U) == 0) {
      x >>= 1U;
      const u64 r = n & 7U;
      if (r == 3 || r == 5) sign = -sign;
    }
    const u64 t = x;
    x = n;
    n = t;
    if ((x & 3U) == 3 && (n & 3U) == 3) sign = -sign;
    x %= n;
  }
  if (n != 1) return Symbol::zero;
  return sign > 0 ? Symbol::plus : Symbol::minus;
}

/// Unsigned overload; avoids the i64 narrowing for residues above 2^63.
constexpr Symbol jacobi_u(u64 a, u64 n) noexcept {
  return jacobi(static_cast<i64>(a % n), n);
}

/// Square root of a modulo an odd prime p (Tonelli-Shanks).
///
/// Returns the canonical root s with s <= (p-1)/2, or nullopt when a is a
/// non-residue.
inline std::optional<u64> sqrt_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) return u64{0};
  if (jacobi_u(a, p) != Symbol::plus) return std::nullopt;

  u64 root = 0;
  if ((p & 3U) == 3) {
    root = pow_mod(a, (p + 1) / 4, p);
  } else {
    u64 q = p - 1;
    unsigned s = 0;
    while ((q & 1U) == 0) {
      q >>= 1U;
      ++s;
    }
    u64 z = 2;
    while (jacobi_u(z, p) != Symbol::minus) ++z;

    u64 c = pow_mod(z, q, p);
    u64 t = pow_mod(a, q, p);
    root = pow_mod(a, (q + 1) / 2, p);
    unsigned m = s;
    while (t != 1) {
      unsigned i = 0;
      u64 t2 = t;
      while (t2 != 1) {
        t2 = mul_mod(t2, t2, p);
        ++i;
      }
      u64 b = c;
      for (unsigned j = 0; j + 1 < m - i; ++j) b = mul_mod(b, b, p);
      m = i;
      c = mul_mod(b, b, p);
      t = mul_mod(t, c, p);
      root = mul_mod(root, b, p);
    }
  }
  if (root > (p - 1) / 2) root = p - root;
  return root;
}

}  // namespace socialist
