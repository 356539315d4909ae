#pragma once

// F(p) statistics and the naive independence heuristic for the chance that p
// has distinct factorials.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <map>
#include <new>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "socialist/modarith.hpp"
#include "socialist/primes.hpp"
#include "socialist/verifier.hpp"

namespace socialist {

/// Which factorials count as "contained in the sequence".
enum class FpConvention {
  /// n! for 1 <= n <= p-1; class 0 is always missed and socialist <=> F = 2.
  below_p,
  /// n! for every n >= 1; class 0 is attained from n = p on, socialist <=> F = 1.
  all_n,
};

struct FpStatistic {
  u64 p = 0;
  u64 f_value = 0;
};

/// Exact F(p) by a full scan with a p-bit membership table.
inline FpStatistic fp_statistic(u64 p, std::vector<u64>& bits,
                                FpConvention convention = FpConvention::below_p) {
  const auto words = static_cast<std::size_t>((p + 63) / 64);
  try {
    if (bits.size() < words) bits.resize(words);
  } catch (const std::bad_alloc&) {
    throw ResourceError("fp_statistic: cannot allocate membership table");
  }
  std::fill(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(words), 0);
  u64 attained = 0;
  u64 f = 1 % p;
  for (u64 n = 1; n <= p - 1; ++n) {
    f = mul_mod(f, n % p, p);
    u64& w = bits[f >> 6U];
    const u64 bit = u64{1} << (f & 63U);
    if ((w & bit) == 0) {
      w |= bit;
      ++attained;
    }
  }
  if (convention == FpConvention::all_n) ++attained;
  return {p, p - attained};
}

inline FpStatistic fp_statistic(u64 p, FpConvention convention = FpConvention::below_p) {
  std::vector<u64> bits;
  return fp_statistic(p, bits, convention);
}

struct FpHistogram {
  /// F-value -> number of primes with that value.
  std::map<u64, u64> counts;
  u64 primes = 0;
  u64 min_f = 0;
  /// Primes attaining min_f, ascending.
  std::vector<u64> min_witnesses;
};

/// F(p) over the primes 5 <= p < max, split across `threads` workers.
inline FpHistogram fp_histogram(u64 max, unsigned threads = 1,
                                FpConvention convention = FpConvention::below_p) {
  FpHistogram h;
  if (max <= 5) return h;
  const std::vector<u64> primes = enumerate_primes(PrimeRange{5, max, u64{1} << 18});
  std::vector<u64> values(primes.size());
  threads = std::max(1U, threads);

  auto work = [&](unsigned t) {
    std::vector<u64> bits;
    for (std::size_t i = t; i < primes.size(); i += threads)
      values[i] = fp_statistic(primes[i], bits, convention).f_value;
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
    work(0);
  }

  h.primes = primes.size();
  h.min_f = std::numeric_limits<u64>::max();
  for (std::size_t i = 0; i < primes.size(); ++i) {
    ++h.counts[values[i]];
    if (values[i] < h.min_f) {
      h.min_f = values[i];
      h.min_witnesses.clear();
    }
    if (values[i] == h.min_f) h.min_witnesses.push_back(primes[i]);
  }
  return h;
}

/// A positive real written as mantissa * 10^exponent with 1 <= mantissa < 10.
struct Scientific {
  double mantissa = 0.0;
  i64 exponent = 0;

  std::string str(int digits = 6) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*fe%+lld", digits - 1, mantissa,
                  static_cast<long long>(exponent));
    return buf;
  }
};

/// Scientific form of exp(ln_value), valid far outside double range.
inline Scientific scientific_from_log(double ln_value) {
  const double log10v = ln_value / std::log(10.0);
  double e = std::floor(log10v);
  double m = std::pow(10.0, log10v - e);
  if (m >= 10.0) {
    m /= 10.0;
    e += 1.0;
  }
  return {m, static_cast<i64>(e)};
}

/// (1 - 1/p)^((p-3)(p-4)/2) and its limit exp((7-p)/2), held as logarithms.
struct HeuristicEstimate {
  u64 p = 0;
  double log_exact = 0.0;
  double log_limit = 0.0;
  /// 7 - p; the limit exponent is this over 2, an integer for odd p.
  i64 limit_numerator = 0;

  /// Underflows to 0 below ~1e-308; use exact_scientific() there.
  double exact() const { return std::exp(log_exact); }
  double limit() const { return std::exp(log_limit); }
  Scientific exact_scientific() const { return scientific_from_log(log_exact); }
  Scientific limit_scientific() const { return scientific_from_log(log_limit); }

  /// The limit form written symbolically, e.g. "exp(-3)" for p = 13.
  std::string limit_symbolic() const {
    if (limit_numerator % 2 == 0) return "exp(" + std::to_string(limit_numerator / 2) + ")";
    return "exp(" + std::to_string(limit_numerator) + "/2)";
  }
};

inline HeuristicEstimate heuristic(u64 p) {
  HeuristicEstimate h;
  h.p = p;
  const double pairs = static_cast<double>(p - 3) * static_cast<double>(p - 4) / 2.0;
  h.log_exact = pairs * std::log1p(-1.0 / static_cast<double>(p));
  h.limit_numerator = 7 - static_cast<i64>(p);
  h.log_limit = static_cast<double>(h.limit_numerator) / 2.0;
  return h;
}

/// Sum of a sequence of positive terms given by their logarithms.
class LogSum {
 public:
  void add(double ln_term) {
    if (ln_term == -std::numeric_limits<double>::infinity()) return;
    if (empty_) {
      max_ = ln_term;
      scaled_ = 1.0;
      empty_ = false;
      return;
    }
    if (ln_term > max_) {
      scaled_ = scaled_ * std::exp(max_ - ln_term) + 1.0;
      max_ = ln_term;
    } else {
      scaled_ += std::exp(ln_term - max_);
    }
  }

  bool empty() const noexcept { return empty_; }
  double log() const {
    return empty_ ? -std::numeric_limits<double>::infinity() : max_ + std::log(scaled_);
  }

 private:
  bool empty_ = true;
  double max_ = 0.0;
  double scaled_ = 0.0;
};

struct ExpectedCount {
  double log_value = -std::numeric_limits<double>::infinity();
  u64 terms = 0;

  double value() const { return std::exp(log_value); }
  Scientific scientific() const { return scientific_from_log(log_value); }
};

/// Heuristic expected number of primes in [lo, hi) with distinct factorials.
inline ExpectedCount expected_count(u64 lo, u64 hi) {
  ExpectedCount out;
  if (lo < 7) throw std::invalid_argument("expected_count: lo must be >= 7");
  if (hi <= lo) return out;
  LogSum sum;
  for_each_prime(PrimeRange{lo, hi, u64{1} << 18}, [&](u64 p) {
    sum.add(heuristic(p).log_exact);
    ++out.terms;
  });
  out.log_value = sum.log();
  return out;
}

}  // namespace socialist
