#pragma once

// Range search: enumerate -> filter -> verify, across worker threads.
//
// The range is cut into fixed integer segments. Workers claim segment indices
// from a shared counter and hand back per-segment results; the coordinator
// commits them strictly in index order, appending the segment's records to
// the results file and advancing completed_through. A checkpoint therefore
// always describes a prefix of segments, and resuming from it reproduces the
// uninterrupted output byte for byte.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "socialist/filters.hpp"
#include "socialist/primes.hpp"
#include "socialist/verifier.hpp"

namespace socialist {

inline constexpr int kCheckpointVersion = 1;

constexpr u64 sat_add(u64 a, u64 b) noexcept {
  return a > std::numeric_limits<u64>::max() - b ? std::numeric_limits<u64>::max() : a + b;
}

/// Terminal outcome counts. Every examined prime lands in exactly one bucket.
struct StageCounters {
  u64 examined = 0;
  u64 rejected_mod8 = 0;
  u64 rejected_legendre5 = 0;
  u64 rejected_legendre23 = 0;
  u64 rejected_cubic = 0;
  u64 collisions = 0;
  u64 neg_half_hits = 0;
  u64 socialist_found = 0;

  u64 terminal_sum() const noexcept {
    u64 s = 0;
    for (u64 v : {rejected_mod8, rejected_legendre5, rejected_legendre23, rejected_cubic,
                  collisions, neg_half_hits, socialist_found})
      s = sat_add(s, v);
    return s;
  }
  u64 stage1_survivors() const noexcept {
    return sat_add(rejected_cubic, stage2_survivors());
  }
  u64 stage2_survivors() const noexcept {
    return sat_add(sat_add(collisions, neg_half_hits), socialist_found);
  }

  void merge(const StageCounters& o) noexcept {
    examined = sat_add(examined, o.examined);
    rejected_mod8 = sat_add(rejected_mod8, o.rejected_mod8);
    rejected_legendre5 = sat_add(rejected_legendre5, o.rejected_legendre5);
    rejected_legendre23 = sat_add(rejected_legendre23, o.rejected_legendre23);
    rejected_cubic = sat_add(rejected_cubic, o.rejected_cubic);
    collisions = sat_add(collisions, o.collisions);
    neg_half_hits = sat_add(neg_half_hits, o.neg_half_hits);
    socialist_found = sat_add(socialist_found, o.socialist_found);
  }

  friend bool operator==(const StageCounters&, const StageCounters&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(StageCounters, examined, rejected_mod8, rejected_legendre5,
                                   rejected_legendre23, rejected_cubic, collisions,
                                   neg_half_hits, socialist_found)

struct SearchConfig {
  PrimeRange range;
  unsigned threads = 1;
  ScanStrategy strategy = ScanStrategy::automatic();
  bool strict_cubic = false;
  std::optional<std::filesystem::path> checkpoint_path;
  /// Results file; empty disables record output.
  std::filesystem::path output_path;
  /// Committed segments between checkpoint writes.
  u64 checkpoint_interval = 16;

  /// Stop cleanly after committing this many segments in this invocation.
  std::optional<u64> stop_after_segments;
  /// Polled by the coordinator; setting it stops the run at the next commit.
  const std::atomic<bool>* cancel = nullptr;

  void validate() const {
    range.validate();
    if (threads < 1) throw std::invalid_argument("SearchConfig: threads must be >= 1");
    if (checkpoint_interval < 1)
      throw std::invalid_argument("SearchConfig: checkpoint_interval must be >= 1");
  }
};

struct SearchCheckpoint {
  int version = kCheckpointVersion;
  u64 lo = 0;
  u64 hi = 0;
  u64 segment_size = 0;
  bool strict_cubic = false;
  std::string strategy = "auto";
  u64 cap = 0;
  u64 checkpoint_interval = 16;
  u64 segments_done = 0;
  u64 completed_through = 0;
  std::string output_path;
  u64 output_bytes = 0;
  double elapsed_seconds = 0.0;
  bool complete = false;
  StageCounters counters;
  std::vector<u64> socialist_primes;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SearchCheckpoint, version, lo, hi, segment_size, strict_cubic,
                                   strategy, cap, checkpoint_interval, segments_done, completed_through, output_path,
                                   output_bytes, elapsed_seconds, complete, counters,
                                   socialist_primes)

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes via a temporary file and rename so readers never see a torn file.
inline void save_checkpoint(const SearchCheckpoint& cp, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
    out << nlohmann::json(cp).dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline SearchCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("corrupt checkpoint " + path.string() + ": " + e.what());
  }
  if (!j.contains("version") || !j["version"].is_number_integer())
    throw CheckpointError("checkpoint has no version field");
  if (j["version"].get<int>() != kCheckpointVersion)
    throw CheckpointError("checkpoint version " + std::to_string(j["version"].get<int>()) +
                          " does not match " + std::to_string(kCheckpointVersion));
  try {
    auto cp = j.get<SearchCheckpoint>();
    if (cp.completed_through < cp.lo || cp.completed_through > cp.hi)
      throw CheckpointError("checkpoint completed_through outside [lo, hi]");
    if (cp.counters.examined != cp.counters.terminal_sum())
      throw CheckpointError("checkpoint counters do not partition examined");
    return cp;
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("corrupt checkpoint " + path.string() + ": " + e.what());
  }
}

struct RangeReport {
  u64 lo = 0;
  u64 hi = 0;
  StageCounters counters;
  u64 completed_through = 0;
  bool complete = false;
  double wall_seconds = 0.0;
  /// Examined primes per second of wall time.
  double throughput = 0.0;
  std::vector<u64> socialist_primes;
};

inline nlohmann::json to_json(const RangeReport& r) {
  nlohmann::json j = r.counters;
  j["lo"] = r.lo;
  j["hi"] = r.hi;
  j["stage1_survivors"] = r.counters.stage1_survivors();
  j["stage2_survivors"] = r.counters.stage2_survivors();
  j["completed_through"] = r.completed_through;
  j["complete"] = r.complete;
  j["wall_seconds"] = r.wall_seconds;
  j["throughput"] = r.throughput;
  j["socialist_primes"] = r.socialist_primes;
  return j;
}

/// One results-file line (no trailing newline).
inline std::string result_record(const FilterOutcome& o) {
  nlohmann::ordered_json j;
  j["p"] = o.p;
  j["outcome"] = to_string(o.verdict);
  j["witness"] = {{"y", o.y}, {"x", o.x}};
  return j.dump();
}

inline std::string result_record(const Verdict& v) {
  nlohmann::ordered_json j;
  j["p"] = v.p;
  j["outcome"] = to_string(v.kind);
  switch (v.kind) {
    case VerdictKind::collision:
      j["witness"] = {{"j", v.j}, {"k", v.k}, {"residue", v.residue}};
      break;
    case VerdictKind::neg_half_hit:
      j["witness"] = {{"k", v.k}};
      break;
    case VerdictKind::socialist:
      j["witness"] = nlohmann::ordered_json::object();
      break;
  }
  return j.dump();
}

namespace detail {

struct SegmentResult {
  StageCounters counters;
  std::string records;
  std::vector<u64> socialist;
};

inline ScanStrategy parse_strategy(const std::string& name, u64 cap) {
  if (name == "naive") return ScanStrategy::naive_bitset();
  if (name == "birthday") return ScanStrategy::birthday(cap);
  if (name == "auto") return ScanStrategy::automatic();
  throw CheckpointError("unknown strategy '" + name + "'");
}

/// Confirms a NegHalfHit verdict from scratch.
inline bool recheck_neg_half(const Verdict& v) {
  const u64 half = factorial_mod((v.p - 1) / 2, v.p);
  return factorial_mod(v.k, v.p) == neg_mod(half, v.p);
}

class SegmentWorker {
 public:
  SegmentWorker(const SegmentedSieve& sieve, const SearchConfig& cfg) : sieve_(sieve), cfg_(cfg) {}

  SegmentResult run(u64 index) {
    SegmentResult res;
    primes_.clear();
    sieve_.sieve_segment(index, primes_, scratch_);
    for (u64 p : primes_) {
      if (p <= 5) continue;
      process(p, res);
    }
    return res;
  }

 private:
  void process(u64 p, SegmentResult& res) {
    auto& c = res.counters;
    c.examined = sat_add(c.examined, 1);
    const FilterOutcome o = run_pipeline(p, cfg_.strict_cubic);
    switch (o.verdict) {
      case FilterVerdict::rejected_mod8:
        c.rejected_mod8 = sat_add(c.rejected_mod8, 1);
        return;
      case FilterVerdict::rejected_legendre5:
        c.rejected_legendre5 = sat_add(c.rejected_legendre5, 1);
        return;
      case FilterVerdict::rejected_legendre23:
        c.rejected_legendre23 = sat_add(c.rejected_legendre23, 1);
        return;
      case FilterVerdict::rejected_cubic:
        if (six_term_product(o.x, p) != 1)
          throw ArithmeticInconsistency("cubic witness fails for p = " + std::to_string(p));
        c.rejected_cubic = sat_add(c.rejected_cubic, 1);
        append(res, result_record(o));
        return;
      case FilterVerdict::candidate:
        break;
    }
    const Verdict v = verify_distinct(p, cfg_.strategy, ws_);
    switch (v.kind) {
      case VerdictKind::collision:
        if (!recheck_witness(p, v.j, v.k))
          throw ArithmeticInconsistency("collision witness fails recheck for p = " +
                                        std::to_string(p));
        c.collisions = sat_add(c.collisions, 1);
        break;
      case VerdictKind::neg_half_hit:
        if (!recheck_neg_half(v))
          throw ArithmeticInconsistency("neg-half witness fails recheck for p = " +
                                        std::to_string(p));
        c.neg_half_hits = sat_add(c.neg_half_hits, 1);
        break;
      case VerdictKind::socialist: {
        ScanWorkspace fresh;
        const Verdict again = verify_distinct(p, ScanStrategy::naive_bitset(), fresh);
        if (again.kind != VerdictKind::socialist)
          throw ArithmeticInconsistency("socialist verdict not reproduced for p = " +
                                        std::to_string(p));
        std::cerr << "\n*************************************************\n"
                  << "*** SOCIALIST PRIME FOUND: p = " << p << "\n"
                  << "*** re-verified by full bitset scan\n"
                  << "*************************************************\n";
        c.socialist_found = sat_add(c.socialist_found, 1);
        res.socialist.push_back(p);
        break;
      }
    }
    append(res, result_record(v));
  }

  static void append(SegmentResult& res, const std::string& line) {
    res.records += line;
    res.records += '\n';
  }

  const SegmentedSieve& sieve_;
  const SearchConfig& cfg_;
  ScanWorkspace ws_;
  std::vector<u64> primes_;
  std::vector<char> scratch_;
};

inline SearchCheckpoint initial_checkpoint(const SearchConfig& cfg) {
  SearchCheckpoint cp;
  cp.lo = cfg.range.lo;
  cp.hi = cfg.range.hi;
  cp.segment_size = cfg.range.segment_size;
  cp.strict_cubic = cfg.strict_cubic;
  cp.strategy = std::string(to_string(cfg.strategy.mode));
  cp.cap = cfg.strategy.cap;
  cp.checkpoint_interval = cfg.checkpoint_interval;
  cp.completed_through = cfg.range.lo;
  cp.output_path = cfg.output_path.string();
  return cp;
}

inline RangeReport report_from(const SearchCheckpoint& cp) {
  RangeReport r;
  r.lo = cp.lo;
  r.hi = cp.hi;
  r.counters = cp.counters;
  r.completed_through = cp.completed_through;
  r.complete = cp.complete;
  r.wall_seconds = cp.elapsed_seconds;
  r.throughput = cp.elapsed_seconds > 0 ? static_cast<double>(cp.counters.examined) / cp.elapsed_seconds : 0.0;
  r.socialist_primes = cp.socialist_primes;
  return r;
}

/// Runs segments [cp.segments_done, total), updating cp as segments commit.
inline RangeReport run_segments(const SearchConfig& cfg, SearchCheckpoint cp, bool resuming) {
  const auto started = std::chrono::steady_clock::now();
  const SegmentedSieve sieve(cfg.range);
  const u64 total = sieve.segment_count();

  std::ofstream out;
  if (!cfg.output_path.empty()) {
    if (resuming) {
      if (!std::filesystem::exists(cfg.output_path))
        throw CheckpointError("results file missing: " + cfg.output_path.string());
      std::filesystem::resize_file(cfg.output_path, cp.output_bytes);
      out.open(cfg.output_path, std::ios::app | std::ios::binary);
    } else {
      out.open(cfg.output_path, std::ios::trunc | std::ios::binary);
    }
    if (!out) throw std::runtime_error("cannot open results file " + cfg.output_path.string());
  }

  auto elapsed_total = [&] {
    return cp.elapsed_seconds +
           std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };
  auto write_checkpoint = [&] {
    if (!cfg.checkpoint_path) return;
    if (out.is_open()) {
      out.flush();
      if (!out) throw std::runtime_error("write failed on " + cfg.output_path.string());
      cp.output_bytes = static_cast<u64>(std::filesystem::file_size(cfg.output_path));
    }
    SearchCheckpoint snapshot = cp;
    snapshot.elapsed_seconds = elapsed_total();
    save_checkpoint(snapshot, *cfg.checkpoint_path);
  };

  std::mutex mu;
  std::condition_variable cv;
  std::map<u64, SegmentResult> ready;
  std::exception_ptr failure;
  std::atomic<bool> stop{false};
  std::atomic<u64> next{cp.segments_done};
  u64 committed = cp.segments_done;
  const u64 window = 4 * static_cast<u64>(cfg.threads);

  auto worker_main = [&] {
    SegmentWorker worker(sieve, cfg);
    for (;;) {
      const u64 idx = next.fetch_add(1);
      if (idx >= total) return;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return stop.load() || idx < committed + window; });
      }
      if (stop.load()) return;
      try {
        SegmentResult res = worker.run(idx);
        std::lock_guard lock(mu);
        ready.emplace(idx, std::move(res));
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
      cv.notify_all();
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(cfg.threads);
  for (unsigned t = 0; t < cfg.threads; ++t) pool.emplace_back(worker_main);

  u64 committed_here = 0;
  u64 since_checkpoint = 0;
  try {
    while (committed < total) {
      SegmentResult res;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return failure || ready.contains(committed); });
        if (failure) break;
        auto node = ready.extract(committed);
        res = std::move(node.mapped());
      }
      if (out.is_open()) out << res.records;
      cp.counters.merge(res.counters);
      cp.socialist_primes.insert(cp.socialist_primes.end(), res.socialist.begin(),
                                 res.socialist.end());
      {
        std::lock_guard lock(mu);
        ++committed;
      }
      cv.notify_all();
      cp.segments_done = committed;
      cp.completed_through = sieve.segment_end(committed - 1);
      ++committed_here;
      if (++since_checkpoint >= cfg.checkpoint_interval) {
        write_checkpoint();
        since_checkpoint = 0;
      }
      const bool interrupted =
          (cfg.stop_after_segments && committed_here >= *cfg.stop_after_segments) ||
          (cfg.cancel && cfg.cancel->load());
      if (interrupted && committed < total) break;
    }
  } catch (...) {
    stop = true;
    cv.notify_all();
    throw;
  }
  stop = true;
  cv.notify_all();
  pool.clear();
  if (failure) std::rethrow_exception(failure);

  cp.complete = (committed == total);
  if (cp.complete) cp.completed_through = cfg.range.hi;
  write_checkpoint();
  if (out.is_open()) {
    out.flush();
    if (!out) throw std::runtime_error("write failed on " + cfg.output_path.string());
  }
  cp.elapsed_seconds = elapsed_total();
  return report_from(cp);
}

}  // namespace detail

/// Searches every prime p > 5 in the configured range. Primes 2, 3 and 5 are
/// outside the problem and are not counted.
inline RangeReport search(const SearchConfig& cfg) {
  cfg.validate();
  return detail::run_segments(cfg, detail::initial_checkpoint(cfg), false);
}

/// Continues an interrupted search from its checkpoint. A completed checkpoint
/// returns its stored report without touching any file.
inline RangeReport resume(const std::filesystem::path& checkpoint_path, unsigned threads = 1,
                          std::optional<u64> stop_after_segments = std::nullopt,
                          const std::atomic<bool>* cancel = nullptr) {
  const SearchCheckpoint cp = load_checkpoint(checkpoint_path);
  if (cp.complete) return detail::report_from(cp);

  SearchConfig cfg;
  cfg.range = PrimeRange{cp.lo, cp.hi, cp.segment_size};
  cfg.threads = threads;
  cfg.strategy = detail::parse_strategy(cp.strategy, cp.cap);
  cfg.strict_cubic = cp.strict_cubic;
  cfg.checkpoint_interval = cp.checkpoint_interval;
  cfg.checkpoint_path = checkpoint_path;
  cfg.output_path = cp.output_path;
  cfg.stop_after_segments = stop_after_segments;
  cfg.cancel = cancel;
  cfg.validate();
  return detail::run_segments(cfg, cp, true);
}

}  // namespace socialist
