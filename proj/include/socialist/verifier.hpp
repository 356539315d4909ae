#pragma once

// Ground-truth distinctness scan of 2!, 3!, ..., (p-1)! modulo p.
//
// The scan stops at the first k whose factorial repeats an earlier one and
// reports (j, k); j is the earlier index with the same residue. For
// p = 1 (mod 4) the scan also watches for -((p-1)/2)!, which a distinct
// sequence can never contain; that gives the NegHalfHit verdict. For
// p = 3 (mod 4) the value -((p-1)/2)! is +-1 and carries no information, so
// the check is skipped there.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <new>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "socialist/modarith.hpp"

namespace socialist {

enum class VerdictKind { socialist, collision, neg_half_hit };

constexpr std::string_view to_string(VerdictKind k) noexcept {
  switch (k) {
    case VerdictKind::socialist: return "Socialist";
    case VerdictKind::collision: return "Collision";
    case VerdictKind::neg_half_hit: return "NegHalfHit";
  }
  return "?";
}

struct Verdict {
  u64 p = 0;
  VerdictKind kind = VerdictKind::socialist;
  /// Collision: j! = k! = residue, 2 <= j < k <= p-1.
  /// NegHalfHit: k! = residue = -((p-1)/2)!, j unused.
  u64 j = 0;
  u64 k = 0;
  u64 residue = 0;
  /// Largest factorial index examined before the verdict was reached.
  u64 scanned_up_to = 0;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct ScanStrategy {
  enum class Mode { naive_bitset, birthday, automatic };

  Mode mode = Mode::automatic;
  /// Birthday table capacity; ignored by naive_bitset, derived for automatic.
  u64 cap = 0;

  static ScanStrategy naive_bitset() { return {Mode::naive_bitset, 0}; }
  static ScanStrategy birthday(u64 cap) {
    if (cap < 2) throw std::invalid_argument("ScanStrategy: birthday cap must be >= 2");
    return {Mode::birthday, cap};
  }
  static ScanStrategy automatic() { return {Mode::automatic, 0}; }

  /// 64 * ceil(sqrt(p)): a clean pass that long happens with probability
  /// about exp(-2048).
  static u64 default_cap(u64 p) {
    auto r = static_cast<u64>(std::sqrt(static_cast<double>(p)));
    while (r * r < p) ++r;
    return 64 * r;
  }

  u64 effective_cap(u64 p) const { return mode == Mode::automatic ? default_cap(p) : cap; }
};

constexpr std::string_view to_string(ScanStrategy::Mode m) noexcept {
  switch (m) {
    case ScanStrategy::Mode::naive_bitset: return "naive";
    case ScanStrategy::Mode::birthday: return "birthday";
    case ScanStrategy::Mode::automatic: return "auto";
  }
  return "?";
}

/// Raised when the p-bit membership table cannot be allocated.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// n! mod p by direct product.
inline u64 factorial_mod(u64 n, u64 p) {
  u64 f = 1 % p;
  for (u64 i = 2; i <= n; ++i) f = mul_mod(f, i % p, p);
  return f;
}

/// Independent confirmation that j! = k! mod p.
inline bool recheck_witness(u64 p, u64 j, u64 k) {
  if (j < 2 || j >= k || k > p - 1) return false;
  return factorial_mod(j, p) == factorial_mod(k, p);
}

/// Open-addressing map from nonzero residue to the first factorial index
/// that produced it. Capacity is kept between clear() calls.
class ResidueIndexTable {
 public:
  void clear() {
    if (slots_.empty()) slots_.resize(kInitial);
    std::fill(slots_.begin(), slots_.end(), Slot{});
    size_ = 0;
  }

  std::size_t size() const noexcept { return size_; }

  /// Index stored for residue, or 0 when absent.
  u64 find(u64 residue) const noexcept {
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t i = hash(residue) & mask;; i = (i + 1) & mask) {
      if (slots_[i].key == 0) return 0;
      if (slots_[i].key == residue) return slots_[i].index;
    }
  }

  /// Inserts residue -> index, assuming residue is absent and nonzero.
  void insert(u64 residue, u64 index) {
    if (2 * (size_ + 1) > slots_.size()) grow();
    place(residue, index);
    ++size_;
  }

 private:
  struct Slot {
    u64 key = 0;
    u64 index = 0;
  };
  static constexpr std::size_t kInitial = 1024;

  static std::size_t hash(u64 x) noexcept {
    x ^= x >> 33U;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33U;
    return static_cast<std::size_t>(x);
  }

  void place(u64 residue, u64 index) {
    const std::size_t mask = slots_.size() - 1;
    std::size_t i = hash(residue) & mask;
    while (slots_[i].key != 0) i = (i + 1) & mask;
    slots_[i] = Slot{residue, index};
  }

  void grow() {
    std::vector<Slot> old(std::max<std::size_t>(kInitial, slots_.size() * 2));
    old.swap(slots_);
    for (const Slot& s : old)
      if (s.key != 0) place(s.key, s.index);
  }

  std::vector<Slot> slots_;
  std::size_t size_ = 0;
};

/// Per-worker scratch space reused across primes.
class ScanWorkspace {
 public:
  ResidueIndexTable& table() { return table_; }

  /// Clears and returns a table of at least p bits.
  std::vector<u64>& bits(u64 p) {
    const std::size_t words = static_cast<std::size_t>((p + 63) / 64);
    try {
      if (bits_.size() < words) bits_.resize(words);
    } catch (const std::bad_alloc&) {
      throw ResourceError("verify_distinct: cannot allocate membership table");
    }
    std::fill(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(words), 0);
    return bits_;
  }

 private:
  ResidueIndexTable table_;
  std::vector<u64> bits_;
};

namespace detail {

/// First index n in [2, limit] with n! = residue mod p.
inline u64 first_index_of(u64 residue, u64 limit, u64 p) {
  u64 f = 1;
  for (u64 n = 2; n <= limit; ++n) {
    f = mul_mod(f, n, p);
    if (f == residue) return n;
  }
  throw std::logic_error("verify_distinct: residue not found on second pass");
}

struct TableStore {
  ResidueIndexTable& t;
  u64 lookup(u64 r, u64 /*k*/, u64 /*p*/) const { return t.find(r); }
  void insert(u64 r, u64 k) { t.insert(r, k); }
};

struct BitsetStore {
  std::vector<u64>& bits;
  bool test(u64 r) const { return (bits[r >> 6U] >> (r & 63U)) & 1U; }
  u64 lookup(u64 r, u64 k, u64 p) const {
    return test(r) ? first_index_of(r, k - 1, p) : 0;
  }
  void insert(u64 r, u64 /*k*/) { bits[r >> 6U] |= u64{1} << (r & 63U); }
};

/// Runs the scan; returns nullopt if `max_entries` residues were stored
/// without reaching a verdict.
template <typename Store>
std::optional<Verdict> scan(u64 p, Store store, u64 max_entries) {
  const u64 half = (p - 1) / 2;
  const bool watch_neg_half = (p % 4 == 1);
  u64 neg_half = 0;  // 0 until ((p-1)/2)! is known; never a valid factorial residue
  u64 f = 1;
  for (u64 k = 2; k <= p - 1; ++k) {
    f = mul_mod(f, k, p);
    if (const u64 j = store.lookup(f, k, p); j != 0)
      return Verdict{p, VerdictKind::collision, j, k, f, k};
    if (k - 1 > max_entries) return std::nullopt;
    store.insert(f, k);
    if (!watch_neg_half) continue;
    if (k == half) {
      neg_half = p - f;
      if (const u64 k1 = store.lookup(neg_half, k, p); k1 != 0)
        return Verdict{p, VerdictKind::neg_half_hit, 0, k1, neg_half, k};
    } else if (k > half && f == neg_half) {
      return Verdict{p, VerdictKind::neg_half_hit, 0, k, f, k};
    }
  }
  return Verdict{p, VerdictKind::socialist, 0, 0, 0, p - 1};
}

inline void require_domain(u64 p) {
  if (p < 5) throw std::invalid_argument("verify_distinct: p must be >= 5");
}

}  // namespace detail

/// Birthday scan without escalation. nullopt means no verdict within `cap`
/// stored residues, which is inconclusive and never implies distinctness.
inline std::optional<Verdict> verify_birthday_only(u64 p, u64 cap, ScanWorkspace& ws) {
  detail::require_domain(p);
  ws.table().clear();
  return detail::scan(p, detail::TableStore{ws.table()}, cap);
}

inline Verdict verify_distinct(u64 p, ScanStrategy strategy, ScanWorkspace& ws) {
  detail::require_domain(p);
  if (strategy.mode != ScanStrategy::Mode::naive_bitset) {
    if (auto v = verify_birthday_only(p, strategy.effective_cap(p), ws)) return *v;
  }
  auto& bits = ws.bits(p);
  return *detail::scan(p, detail::BitsetStore{bits}, p);
}

inline Verdict verify_distinct(u64 p, ScanStrategy strategy = ScanStrategy::automatic()) {
  ScanWorkspace ws;
  return verify_distinct(p, strategy, ws);
}

}  // namespace socialist
