#pragma once

// Low-degree polynomial congruences over prime fields.
//
// Root finding works in F_p[y]/(f): y^p mod f is built by square-and-multiply,
// gcd(y^p - y, f) isolates the product of the linear factors, and that product
// is split by degree (direct, quadratic formula, or randomized equal-degree
// splitting with a generator seeded by p).

#include <algorithm>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "socialist/modarith.hpp"

namespace socialist {

/// y^3 + b*y^2 + c*y + d.
struct MonicCubic {
  i64 b = 0;
  i64 c = 0;
  i64 d = 0;
};

/// y(y+4)(y+6) - 1, the cubic behind the degree-six filter.
inline constexpr MonicCubic kSexticCubic{10, 24, -1};
/// x(x+1)(x+2) - 1.
inline constexpr MonicCubic kTripleCubic{3, 2, -1};

/// Monic polynomial x^n + tail[0] x^(n-1) + ... + tail[n-1], with n = tail.size().
struct MonicPoly {
  std::vector<i64> tail;

  std::size_t degree() const noexcept { return tail.size(); }

  static MonicPoly from(const MonicCubic& f) { return MonicPoly{{f.b, f.c, f.d}}; }
};

/// Sorted distinct roots of a polynomial modulo p.
struct CubicRootSet {
  u64 p = 0;
  std::vector<u64> roots;
};

/// Degree n, irreducible factor count nu and discriminant D of a polynomial mod p.
struct FactorParity {
  unsigned degree = 0;
  unsigned nu = 0;
  i64 discriminant = 0;

  /// (-1)^(n - nu); by Stickelberger this equals the Legendre symbol (D/p).
  int parity_sign() const noexcept { return ((degree - nu) % 2 == 0) ? 1 : -1; }
};

constexpr i64 cubic_discriminant(const MonicCubic& f) noexcept {
  const i64 b = f.b, c = f.c, d = f.d;
  return 18 * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * c * c * c - 27 * d * d;
}

static_assert(cubic_discriminant(kSexticCubic) == 1957);
static_assert(cubic_discriminant(kTripleCubic) == -23);

/// Discriminant of a monic polynomial of degree 1..3.
inline i64 discriminant(const MonicPoly& f) {
  switch (f.degree()) {
    case 1:
      return 1;
    case 2:
      return f.tail[0] * f.tail[0] - 4 * f.tail[1];
    case 3:
      return cubic_discriminant(MonicCubic{f.tail[0], f.tail[1], f.tail[2]});
    default:
      throw std::invalid_argument("discriminant: degree must be 1, 2 or 3");
  }
}

namespace poly {

/// Dense polynomial over F_p, coefficients low to high, no trailing zeros.
using Coeffs = std::vector<u64>;

inline void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int deg(const Coeffs& a) { return static_cast<int>(a.size()) - 1; }

inline Coeffs from_monic(const MonicPoly& f, u64 p) {
  const std::size_t n = f.degree();
  Coeffs out(n + 1);
  out[n] = 1 % p;
  for (std::size_t i = 0; i < n; ++i) out[n - 1 - i] = reduce(f.tail[i], p);
  trim(out);
  return out;
}

inline u64 eval(const Coeffs& a, u64 x, u64 p) {
  u64 acc = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = add_mod(mul_mod(acc, x, p), *it, p);
  return acc;
}

/// Remainder of a modulo the nonzero polynomial m.
inline Coeffs rem(Coeffs a, const Coeffs& m, u64 p) {
  trim(a);
  const int dm = deg(m);
  const u64 lead_inv = inv_mod(m.back(), p);
  while (deg(a) >= dm) {
    const u64 factor = mul_mod(a.back(), lead_inv, p);
    const int shift = deg(a) - dm;
    for (int i = 0; i <= dm; ++i) {
      auto& slot = a[static_cast<std::size_t>(shift + i)];
      slot = sub_mod(slot, mul_mod(factor, m[static_cast<std::size_t>(i)], p), p);
    }
    trim(a);
  }
  return a;
}

/// Quotient of a by m; m must divide a exactly for the callers here.
inline Coeffs quot(Coeffs a, const Coeffs& m, u64 p) {
  trim(a);
  const int dm = deg(m);
  if (deg(a) < dm) return {};
  Coeffs q(static_cast<std::size_t>(deg(a) - dm + 1), 0);
  const u64 lead_inv = inv_mod(m.back(), p);
  while (deg(a) >= dm) {
    const u64 factor = mul_mod(a.back(), lead_inv, p);
    const int shift = deg(a) - dm;
    q[static_cast<std::size_t>(shift)] = factor;
    for (int i = 0; i <= dm; ++i) {
      auto& slot = a[static_cast<std::size_t>(shift + i)];
      slot = sub_mod(slot, mul_mod(factor, m[static_cast<std::size_t>(i)], p), p);
    }
    trim(a);
  }
  return q;
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = add_mod(out[i + j], mul_mod(a[i], b[j], p), p);
  trim(out);
  return out;
}

inline Coeffs mul_rem(const Coeffs& a, const Coeffs& b, const Coeffs& m, u64 p) {
  return rem(mul(a, b, p), m, p);
}

inline Coeffs pow_rem(Coeffs base, u64 e, const Coeffs& m, u64 p) {
  Coeffs result = rem(Coeffs{1}, m, p);
  base = rem(std::move(base), m, p);
  while (e != 0) {
    if (e & 1U) result = mul_rem(result, base, m, p);
    base = mul_rem(base, base, m, p);
    e >>= 1U;
  }
  return result;
}

inline Coeffs make_monic(Coeffs a, u64 p) {
  trim(a);
  if (a.empty()) return a;
  const u64 inv = inv_mod(a.back(), p);
  for (auto& c : a) c = mul_mod(c, inv, p);
  return a;
}

inline Coeffs gcd(Coeffs a, Coeffs b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Coeffs r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(std::move(a), p);
}

inline Coeffs sub(Coeffs a, const Coeffs& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = sub_mod(a[i], b[i], p);
  trim(a);
  return a;
}

}  // namespace poly

namespace detail {

inline void roots_of_split(const poly::Coeffs& g, u64 p, std::mt19937_64& rng,
                           std::vector<u64>& out) {
  // g is monic, squarefree and a product of distinct linear factors
  const int d = poly::deg(g);
  if (d <= 0) return;
  if (d == 1) {
    out.push_back(neg_mod(g[0], p));
    return;
  }
  if (d == 2) {
    // y^2 + a y + c: y = (-a +- sqrt(a^2 - 4c)) / 2
    const u64 a = g[1], c = g[0];
    const u64 disc = sub_mod(mul_mod(a, a, p), mul_mod(4 % p, c, p), p);
    const auto s = sqrt_mod(disc, p);
    if (!s) throw std::logic_error("cubic_roots: split quadratic has no roots");
    const u64 half = inv_mod(2, p);
    out.push_back(mul_mod(sub_mod(*s, a, p), half, p));
    if (*s != 0) out.push_back(mul_mod(sub_mod(neg_mod(*s, p), a, p), half, p));
    return;
  }
  // Equal-degree splitting: gcd((y+t)^((p-1)/2) - 1, g) is a proper factor
  // for roughly three choices of t in four.
  std::uniform_int_distribution<u64> pick(0, p - 1);
  for (;;) {
    const poly::Coeffs shifted{pick(rng), 1};
    poly::Coeffs h = poly::pow_rem(shifted, (p - 1) / 2, g, p);
    h = poly::sub(std::move(h), poly::Coeffs{1}, p);
    poly::Coeffs f1 = poly::gcd(g, h, p);
    const int d1 = poly::deg(f1);
    if (d1 <= 0 || d1 >= d) continue;
    roots_of_split(f1, p, rng, out);
    roots_of_split(poly::make_monic(poly::quot(g, f1, p), p), p, rng, out);
    return;
  }
}

inline std::vector<u64> brute_force_roots(const poly::Coeffs& f, u64 p) {
  std::vector<u64> out;
  for (u64 y = 0; y < p; ++y)
    if (poly::eval(f, y, p) == 0) out.push_back(y);
  return out;
}

}  // namespace detail

/// Distinct roots of a monic polynomial of degree <= 3 modulo the odd prime p,
/// sorted ascending.
///
/// When p divides the discriminant the polynomial has a repeated factor mod p;
/// that case (only finitely many small p for a fixed polynomial) is resolved
/// by exhaustive scan.
inline CubicRootSet polynomial_roots(const MonicPoly& f, u64 p) {
  CubicRootSet result{p, {}};
  const poly::Coeffs fp = poly::from_monic(f, p);
  if (poly::deg(fp) <= 0) return result;

  if (reduce(discriminant(f), p) == 0) {
    result.roots = detail::brute_force_roots(fp, p);
    return result;
  }

  // y^p - y mod f
  poly::Coeffs yp = poly::pow_rem(poly::Coeffs{0, 1}, p, fp, p);
  yp = poly::sub(std::move(yp), poly::Coeffs{0, 1}, p);
  const poly::Coeffs linear_part = poly::gcd(fp, yp, p);

  std::mt19937_64 rng(p);
  detail::roots_of_split(linear_part, p, rng, result.roots);
  std::sort(result.roots.begin(), result.roots.end());
  return result;
}

inline CubicRootSet cubic_roots(const MonicCubic& f, u64 p) {
  return polynomial_roots(MonicPoly::from(f), p);
}

/// Number of irreducible factors of f mod p, read off the root structure.
/// Throws std::domain_error when p divides the discriminant.
inline FactorParity factor_parity(const MonicPoly& f, u64 p) {
  const i64 disc = discriminant(f);
  if (reduce(disc, p) == 0)
    throw std::domain_error("factor_parity: p divides the discriminant");
  FactorParity out{static_cast<unsigned>(f.degree()), 0, disc};
  switch (f.degree()) {
    case 1:
      out.nu = 1;
      break;
    case 2:
      out.nu = jacobi(disc, p) == Symbol::plus ? 2 : 1;
      break;
    case 3: {
      const auto n_roots = polynomial_roots(f, p).roots.size();
      out.nu = n_roots == 3 ? 3 : (n_roots == 1 ? 2 : 1);
      break;
    }
    default:
      throw std::invalid_argument("factor_parity: degree must be 1, 2 or 3");
  }
  return out;
}

inline FactorParity factor_parity(const MonicCubic& f, u64 p) {
  return factor_parity(MonicPoly::from(f), p);
}

/// Checks x(x+1)(x+2)(x+3)(x+4)(x+5) == y(y+4)(y+6) mod p for y = x(x+5).
inline bool sextic_substitution_check(u64 x, u64 p) {
  x %= p;
  u64 lhs = 1 % p;
  for (u64 i = 0; i < 6; ++i) lhs = mul_mod(lhs, add_mod(x, i % p, p), p);
  const u64 y = mul_mod(x, add_mod(x, 5 % p, p), p);
  u64 rhs = mul_mod(y, add_mod(y, 4 % p, p), p);
  rhs = mul_mod(rhs, add_mod(y, 6 % p, p), p);
  return lhs == rhs;
}

}  // namespace socialist
