#pragma once

// Necessary conditions for 2!, 3!, ..., (p-1)! to be pairwise distinct mod p.
//
//   stage 0: p = 5 (mod 8)
//   stage 1: (5/p) = -1 and (-23/p) = +1
//   stage 2: (1957/p) = +1, or every root y of y(y+4)(y+6) - 1 has
//            (4y+25/p) = -1
//
// A stage-2 rejection carries a root y and the lift x with x(x+5) = y, so that
// x(x+1)...(x+5) = 1 and therefore (x+5)! = (x-1)! mod p.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "socialist/modarith.hpp"
#include "socialist/polycong.hpp"
#include "socialist/primes.hpp"

namespace socialist {

enum class FilterVerdict {
  rejected_mod8,
  rejected_legendre5,
  rejected_legendre23,
  rejected_cubic,
  candidate,
};

constexpr std::string_view to_string(FilterVerdict v) noexcept {
  switch (v) {
    case FilterVerdict::rejected_mod8: return "RejectedMod8";
    case FilterVerdict::rejected_legendre5: return "RejectedLegendre5";
    case FilterVerdict::rejected_legendre23: return "RejectedLegendre23";
    case FilterVerdict::rejected_cubic: return "RejectedCubic";
    case FilterVerdict::candidate: return "Candidate";
  }
  return "?";
}

struct FilterOutcome {
  u64 p = 0;
  FilterVerdict verdict = FilterVerdict::candidate;
  /// Number of stages passed: 0..2 for rejections, 3 for candidates.
  unsigned stage_reached = 0;
  /// Only meaningful for rejected_cubic.
  u64 y = 0;
  u64 x = 0;

  bool is_candidate() const noexcept { return verdict == FilterVerdict::candidate; }
};

/// Rejection witness from the cubic stage.
struct CubicRejection {
  u64 y = 0;
  u64 x = 0;
};

/// Thrown when an internal arithmetic cross-check fails.
class ArithmeticInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline bool stage_mod8(u64 p) noexcept { return p % 8 == 5; }

enum class LegendreResult { pass, failed_5, failed_minus23 };

inline LegendreResult stage_legendre(u64 p) noexcept {
  if (jacobi(5, p) != Symbol::minus) return LegendreResult::failed_5;
  if (jacobi(-23, p) != Symbol::plus) return LegendreResult::failed_minus23;
  return LegendreResult::pass;
}

/// x(x+1)(x+2)(x+3)(x+4)(x+5) mod p.
inline u64 six_term_product(u64 x, u64 p) {
  u64 acc = 1 % p;
  for (u64 i = 0; i < 6; ++i) acc = mul_mod(acc, (x + i) % p, p);
  return acc;
}

/// Lifts a root y of the cubic to x with x(x+5) = y, using the canonical
/// square root of 4y + 25.
inline u64 lift_root(u64 y, u64 p) {
  const u64 t = (4 * (y % p) % p + 25) % p;
  const auto s = sqrt_mod(t, p);
  if (!s) throw ArithmeticInconsistency("stage_cubic: 4y+25 has no square root");
  const u64 x = mul_mod(sub_mod(*s, 5 % p, p), inv_mod(2, p), p);
  if (mul_mod(x, (x + 5) % p, p) != y % p)
    throw ArithmeticInconsistency("stage_cubic: lifted x does not satisfy x(x+5) = y");
  return x;
}

/// Returns nullopt on pass, otherwise the smallest failing root and its lift.
///
/// `strict` also examines the roots when (1957/p) = +1; the default follows
/// the condition as published, passing that branch unconditionally.
inline std::optional<CubicRejection> stage_cubic(u64 p, bool strict = false) {
  if (!strict && jacobi(1957, p) == Symbol::plus) return std::nullopt;
  for (u64 y : cubic_roots(kSexticCubic, p).roots) {
    // (4y+25/p) = 0 is a double root x = -5/2 and still lifts to a collision
    if (jacobi_u((4 * y + 25) % p, p) == Symbol::minus) continue;
    const u64 x = lift_root(y, p);
    if (x < 1 || x + 6 > p)
      throw ArithmeticInconsistency("stage_cubic: lifted x outside [1, p-6]");
    if (six_term_product(x, p) != 1 % p)
      throw ArithmeticInconsistency("stage_cubic: x(x+1)...(x+5) != 1");
    return CubicRejection{y, x};
  }
  return std::nullopt;
}

/// Applies the three stages in order, stopping at the first rejection.
inline FilterOutcome run_pipeline(u64 p, bool strict_cubic = false) {
  FilterOutcome out;
  out.p = p;
  if (!stage_mod8(p)) {
    out.verdict = FilterVerdict::rejected_mod8;
    out.stage_reached = 0;
    return out;
  }
  switch (stage_legendre(p)) {
    case LegendreResult::failed_5:
      out.verdict = FilterVerdict::rejected_legendre5;
      out.stage_reached = 1;
      return out;
    case LegendreResult::failed_minus23:
      out.verdict = FilterVerdict::rejected_legendre23;
      out.stage_reached = 1;
      return out;
    case LegendreResult::pass:
      break;
  }
  if (auto rej = stage_cubic(p, strict_cubic)) {
    out.verdict = FilterVerdict::rejected_cubic;
    out.stage_reached = 2;
    out.y = rej->y;
    out.x = rej->x;
    return out;
  }
  out.verdict = FilterVerdict::candidate;
  out.stage_reached = 3;
  return out;
}

/// Survivor counts of each stage over the primes p > 5 of a range.
struct FilterCounts {
  u64 examined = 0;
  u64 stage0_survivors = 0;
  u64 stage1_survivors = 0;
  u64 stage2_survivors = 0;
  std::vector<u64> stage1_list;
  std::vector<u64> stage2_list;
};

inline FilterCounts count_filters(u64 from, u64 to, bool strict_cubic = false) {
  FilterCounts counts;
  if (to <= from) return counts;
  const PrimeRange range{std::max<u64>(from, 2), to, u64{1} << 18};
  for_each_prime(range, [&](u64 p) {
    if (p <= 5) return;
    ++counts.examined;
    const FilterOutcome o = run_pipeline(p, strict_cubic);
    if (o.stage_reached >= 1) ++counts.stage0_survivors;
    if (o.stage_reached >= 2) {
      ++counts.stage1_survivors;
      counts.stage1_list.push_back(p);
    }
    if (o.stage_reached >= 3) {
      ++counts.stage2_survivors;
      counts.stage2_list.push_back(p);
    }
  });
  return counts;
}

}  // namespace socialist
