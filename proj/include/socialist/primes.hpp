#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "socialist/modarith.hpp"

namespace socialist {

/// Half-open interval [lo, hi) of integers to enumerate primes from.
struct PrimeRange {
  u64 lo = 2;
  u64 hi = 2;
  u64 segment_size = u64{1} << 18;

  void validate() const {
    if (lo < 2) throw std::invalid_argument("PrimeRange: lo must be >= 2");
    if (hi < lo) throw std::invalid_argument("PrimeRange: hi must be >= lo");
    if (hi > (u64{1} << 63)) throw std::invalid_argument("PrimeRange: hi exceeds 2^63");
    if (segment_size < 2) throw std::invalid_argument("PrimeRange: segment_size must be >= 2");
  }
};

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 d, unsigned s, u64 a) {
  // n may be up to 2^64 - 1 here, so use 128-bit products directly
  auto mul = [n](u64 x, u64 y) { return static_cast<u64>(static_cast<u128>(x) * y % n); };
  u64 x = 1;
  u64 b = a % n;
  for (u64 e = d; e != 0; e >>= 1U) {
    if (e & 1U) x = mul(x, b);
    b = mul(b, b);
  }
  if (x == 1 || x == n - 1) return false;
  for (unsigned r = 1; r < s; ++r) {
    x = mul(x, x);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace detail

/// Deterministic for all 64-bit n: the first twelve primes as Miller-Rabin
/// bases have no strong pseudoprime below 3.3e24.
inline bool is_prime(u64 n) {
  constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (u64 q : small) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : small)
    if (detail::miller_rabin_witness(n, d, s, a)) return false;
  return true;
}

inline u64 isqrt(u64 n) {
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Primes below `limit` by a plain sieve of Eratosthenes.
inline std::vector<u64> small_primes_below(u64 limit) {
  std::vector<u64> out;
  if (limit <= 2) return out;
  std::vector<bool> composite(limit, false);
  for (u64 i = 2; i < limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j < limit; j += i) composite[j] = true;
  }
  return out;
}

/// Segmented sieve of Eratosthenes over a PrimeRange.
///
/// The base primes up to sqrt(hi) are computed once on construction and are
/// shared read-only, so a single sieve object may serve several threads that
/// each call sieve_segment() on disjoint segments with their own buffer.
class SegmentedSieve {
 public:
  explicit SegmentedSieve(PrimeRange range) : range_(range) {
    range_.validate();
    base_ = small_primes_below(isqrt(range_.hi) + 1);
  }

  const PrimeRange& range() const noexcept { return range_; }

  u64 segment_count() const noexcept {
    const u64 span = range_.hi - range_.lo;
    return (span + range_.segment_size - 1) / range_.segment_size;
  }

  u64 segment_begin(u64 index) const noexcept {
    return range_.lo + std::min(index * range_.segment_size, range_.hi - range_.lo);
  }
  u64 segment_end(u64 index) const noexcept { return segment_begin(index + 1); }

  /// Appends the primes of segment `index` to `out` in increasing order.
  /// `scratch` is resized as needed and may be reused between calls.
  void sieve_segment(u64 index, std::vector<u64>& out, std::vector<char>& scratch) const {
    sieve_interval(segment_begin(index), segment_end(index), out, scratch);
  }

  /// Primes in [begin, end), with end <= range().hi.
  void sieve_interval(u64 begin, u64 end, std::vector<u64>& out,
                      std::vector<char>& scratch) const {
    if (begin >= end) return;
    const u64 len = end - begin;
    scratch.assign(len, 1);
    for (u64 q : base_) {
      if (q * q >= end) break;
      u64 start = std::max(q * q, (begin + q - 1) / q * q);
      for (u64 m = start; m < end; m += q) scratch[m - begin] = 0;
    }
    for (u64 i = 0; i < len; ++i) {
      const u64 n = begin + i;
      if (scratch[i] && n >= 2) out.push_back(n);
    }
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    std::vector<u64> buf;
    std::vector<char> scratch;
    for (u64 s = 0; s < segment_count(); ++s) {
      buf.clear();
      sieve_segment(s, buf, scratch);
      for (u64 p : buf) fn(p);
    }
  }

 private:
  PrimeRange range_;
  std::vector<u64> base_;
};

/// Calls fn(p) for every prime in the range, increasing.
template <typename Fn>
void for_each_prime(const PrimeRange& range, Fn&& fn) {
  SegmentedSieve(range).for_each(std::forward<Fn>(fn));
}

inline std::vector<u64> enumerate_primes(const PrimeRange& range) {
  std::vector<u64> out;
  for_each_prime(range, [&](u64 p) { out.push_back(p); });
  return out;
}

}  // namespace socialist
