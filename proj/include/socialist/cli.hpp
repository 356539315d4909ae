#pragma once

// Command-line front end. Kept in a header so tests can drive run() with
// captured streams.
//
// Exit codes: 0 success, 1 runtime error, 2 socialist prime found,
// 64 usage error.

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "socialist/socialist.hpp"

namespace socialist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitSocialist = 2;
inline constexpr int kExitUsage = 64;

/// Name of the environment variable supplying the default thread count.
inline constexpr const char* kThreadsEnv = "SOCIALIST_THREADS";

inline unsigned default_threads() {
  if (const char* env = std::getenv(kThreadsEnv)) {
    try {
      const unsigned long v = std::stoul(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline ScanStrategy make_strategy(const std::string& name, u64 cap) {
  if (name == "auto") return ScanStrategy::automatic();
  if (name == "naive") return ScanStrategy::naive_bitset();
  if (name == "birthday") {
    if (cap < 2) throw UsageError("--cap must be >= 2 for the birthday strategy");
    return ScanStrategy::birthday(cap);
  }
  throw UsageError("unknown strategy '" + name + "'");
}

inline std::string verdict_text(const Verdict& v) {
  std::ostringstream s;
  switch (v.kind) {
    case VerdictKind::collision:
      s << "Collision: " << v.j << "! ≡ " << v.k << "! ≡ " << v.residue << " (mod " << v.p
        << ")";
      break;
    case VerdictKind::neg_half_hit:
      s << "NegHalfHit: " << v.k << "! ≡ -(" << (v.p - 1) / 2 << ")! ≡ " << v.residue
        << " (mod " << v.p << ")";
      break;
    case VerdictKind::socialist:
      s << "Socialist: 2!, 3!, ..., " << v.p - 1 << "! are pairwise distinct mod " << v.p;
      break;
  }
  return s.str();
}

inline nlohmann::json verdict_json(const Verdict& v) {
  nlohmann::json j{{"p", v.p},
                   {"kind", std::string(to_string(v.kind))},
                   {"scanned_up_to", v.scanned_up_to}};
  if (v.kind == VerdictKind::collision) j["witness"] = {{"j", v.j}, {"k", v.k}, {"residue", v.residue}};
  if (v.kind == VerdictKind::neg_half_hit) j["witness"] = {{"k", v.k}, {"residue", v.residue}};
  return j;
}

inline void print_counters(std::ostream& out, const RangeReport& r) {
  const auto& c = r.counters;
  out << "range                 [" << r.lo << ", " << r.hi << ")"
      << (r.complete ? "" : "  (interrupted)") << "\n"
      << "completed_through     " << r.completed_through << "\n"
      << "examined              " << c.examined << "\n"
      << "rejected_mod8         " << c.rejected_mod8 << "\n"
      << "rejected_legendre5    " << c.rejected_legendre5 << "\n"
      << "rejected_legendre23   " << c.rejected_legendre23 << "\n"
      << "rejected_cubic        " << c.rejected_cubic << "\n"
      << "collisions            " << c.collisions << "\n"
      << "neg_half_hits         " << c.neg_half_hits << "\n"
      << "socialist_found       " << c.socialist_found << "\n"
      << "stage1_survivors      " << c.stage1_survivors() << "\n"
      << "stage2_survivors      " << c.stage2_survivors() << "\n"
      << "wall_seconds          " << r.wall_seconds << "\n"
      << "throughput            " << r.throughput << " primes/s\n";
  for (u64 p : r.socialist_primes) out << "SOCIALIST PRIME: " << p << "\n";
}

inline int report_exit(std::ostream& out, std::ostream& err, const RangeReport& r, bool json) {
  if (json)
    out << to_json(r).dump() << "\n";
  else
    print_counters(out, r);
  if (r.counters.socialist_found > 0) return kExitSocialist;
  if (!r.complete) {
    err << "search interrupted at " << r.completed_through << "; continue with `resume`\n";
    return kExitError;
  }
  return kExitOk;
}

inline std::atomic<bool>& interrupt_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

/// Parses argv and dispatches. Never throws.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Search for primes whose factorials 2!, ..., (p-1)! are distinct mod p"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Machine-readable JSON output");

  // search
  u64 s_from = 7, s_to = 0, s_segment = u64{1} << 18, s_cap = 0, s_interval = 16;
  unsigned s_threads = default_threads();
  std::string s_checkpoint, s_out = "search_results.jsonl", s_strategy = "auto";
  bool s_strict = false;
  auto* search_cmd = app.add_subcommand("search", "Filter and verify every prime in [from, to)");
  search_cmd->add_option("--from", s_from, "Range start (inclusive)")->capture_default_str();
  search_cmd->add_option("--to", s_to, "Range end (exclusive)")->required();
  search_cmd->add_option("--threads", s_threads, "Worker threads (default: $SOCIALIST_THREADS or all cores)");
  search_cmd->add_option("--segment-size", s_segment, "Integers per sieve segment")->capture_default_str();
  search_cmd->add_option("--checkpoint", s_checkpoint, "Checkpoint file (default: none)");
  search_cmd->add_option("--checkpoint-interval", s_interval, "Segments between checkpoint writes")->capture_default_str();
  search_cmd->add_option("--out", s_out, "Results file, one JSON record per line")->capture_default_str();
  search_cmd->add_flag("--strict-cubic", s_strict, "Also check cubic roots when (1957/p) = +1");
  search_cmd->add_option("--strategy", s_strategy, "auto | naive | birthday")->capture_default_str();
  search_cmd->add_option("--cap", s_cap, "Table capacity for --strategy birthday");

  // resume
  std::string r_checkpoint;
  unsigned r_threads = default_threads();
  auto* resume_cmd = app.add_subcommand("resume", "Continue a search from its checkpoint");
  resume_cmd->add_option("--checkpoint", r_checkpoint, "Checkpoint file")->required();
  resume_cmd->add_option("--threads", r_threads, "Worker threads");

  // verify
  u64 v_p = 0, v_cap = 0;
  std::string v_strategy = "auto";
  auto* verify_cmd = app.add_subcommand("verify", "Scan one prime for a factorial collision");
  verify_cmd->add_option("p", v_p, "Prime to verify (>= 5)")->required();
  verify_cmd->add_option("--strategy", v_strategy, "auto | naive | birthday")->capture_default_str();
  verify_cmd->add_option("--cap", v_cap, "Table capacity for --strategy birthday");

  // filter-counts
  u64 f_from = 7, f_to = 0;
  bool f_strict = false, f_list = false;
  auto* filter_cmd = app.add_subcommand("filter-counts", "Per-stage filter survivor counts");
  filter_cmd->add_option("--from", f_from, "Range start (inclusive)")->capture_default_str();
  filter_cmd->add_option("--to", f_to, "Range end (exclusive)")->required();
  filter_cmd->add_flag("--strict-cubic", f_strict, "Also check cubic roots when (1957/p) = +1");
  filter_cmd->add_flag("--list", f_list, "Print survivor lists in human output");

  // fp-stats
  u64 fp_max = 0, fp_p = 0;
  unsigned fp_threads = default_threads();
  bool fp_all_n = false;
  auto* fp_cmd = app.add_subcommand("fp-stats", "F(p): residue classes missed by 1!, ..., (p-1)!");
  fp_cmd->add_option("--max", fp_max, "Histogram over primes 5 <= p < max");
  fp_cmd->add_option("--p", fp_p, "Single prime");
  fp_cmd->add_option("--threads", fp_threads, "Worker threads");
  fp_cmd->add_flag("--all-n", fp_all_n, "Count n >= p too, so class 0 is attained");

  // heuristic
  u64 h_p = 0, h_from = 0, h_to = 0;
  auto* heur_cmd = app.add_subcommand("heuristic", "Independence heuristic for distinct factorials");
  heur_cmd->add_option("--p", h_p, "Single prime (> 5)");
  heur_cmd->add_option("--from", h_from, "Expected count over primes in [from, to)");
  heur_cmd->add_option("--to", h_to, "Range end (exclusive)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*search_cmd) {
      if (s_from >= s_to) throw UsageError("--from must be < --to");
      if (s_threads < 1) throw UsageError("--threads must be >= 1");
      SearchConfig cfg;
      cfg.range = PrimeRange{std::max<u64>(s_from, 2), s_to, s_segment};
      cfg.threads = s_threads;
      cfg.strategy = make_strategy(s_strategy, s_cap);
      cfg.strict_cubic = s_strict;
      if (!s_checkpoint.empty()) cfg.checkpoint_path = s_checkpoint;
      cfg.output_path = s_out;
      cfg.checkpoint_interval = s_interval;
      cfg.cancel = &interrupt_flag();
      try {
        cfg.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      return report_exit(out, err, search(cfg), json);
    }

    if (*resume_cmd) {
      if (r_threads < 1) throw UsageError("--threads must be >= 1");
      return report_exit(out, err, resume(r_checkpoint, r_threads, std::nullopt, &interrupt_flag()),
                         json);
    }

    if (*verify_cmd) {
      if (v_p < 5 || !is_prime(v_p)) throw UsageError("p must be a prime >= 5");
      const Verdict v = verify_distinct(v_p, make_strategy(v_strategy, v_cap));
      if (json) {
        nlohmann::json j = verdict_json(v);
        if (v_p > 5) j["filter"] = std::string(to_string(run_pipeline(v_p).verdict));
        out << j.dump() << "\n";
      } else {
        out << verdict_text(v) << "\n";
      }
      return v.kind == VerdictKind::socialist && v_p > 5 ? kExitSocialist : kExitOk;
    }

    if (*filter_cmd) {
      if (f_from >= f_to) throw UsageError("--from must be < --to");
      const FilterCounts c = count_filters(f_from, f_to, f_strict);
      if (json) {
        out << nlohmann::json{{"from", f_from},
                              {"to", f_to},
                              {"strict_cubic", f_strict},
                              {"examined", c.examined},
                              {"stage0_survivors", c.stage0_survivors},
                              {"stage1_survivors", c.stage1_survivors},
                              {"stage2_survivors", c.stage2_survivors},
                              {"stage1_list", c.stage1_list},
                              {"stage2_list", c.stage2_list}}
                   .dump()
            << "\n";
      } else {
        out << "primes examined (p > 5)   " << c.examined << "\n"
            << "stage 0 survivors (mod 8) " << c.stage0_survivors << "\n"
            << "stage 1 survivors (5, -23) " << c.stage1_survivors << "\n"
            << "stage 2 survivors (1957)  " << c.stage2_survivors << "\n";
        if (f_list || c.stage1_list.size() <= 100) {
          out << "stage 1 survivors:";
          for (u64 p : c.stage1_list) out << ' ' << p;
          out << "\n";
        }
        if (f_list) {
          out << "stage 2 survivors:";
          for (u64 p : c.stage2_list) out << ' ' << p;
          out << "\n";
        }
      }
      return kExitOk;
    }

    if (*fp_cmd) {
      const auto conv = fp_all_n ? FpConvention::all_n : FpConvention::below_p;
      if ((fp_p == 0) == (fp_max == 0)) throw UsageError("give exactly one of --p or --max");
      if (fp_p != 0) {
        if (fp_p < 3 || !is_prime(fp_p)) throw UsageError("--p must be an odd prime");
        const FpStatistic s = fp_statistic(fp_p, conv);
        if (json)
          out << nlohmann::json{{"p", s.p}, {"F", s.f_value}}.dump() << "\n";
        else
          out << "F(" << s.p << ") = " << s.f_value << "\n";
        return kExitOk;
      }
      const FpHistogram h = fp_histogram(fp_max, fp_threads, conv);
      if (json) {
        nlohmann::json hist = nlohmann::json::object();
        for (const auto& [f, n] : h.counts) hist[std::to_string(f)] = n;
        out << nlohmann::json{{"max", fp_max},
                              {"primes", h.primes},
                              {"histogram", hist},
                              {"min_f", h.min_f},
                              {"min_witnesses", h.min_witnesses}}
                   .dump()
            << "\n";
      } else {
        for (const auto& [f, n] : h.counts) out << f << ' ' << n << "\n";
        out << "# primes " << h.primes << "\n# min_f " << h.min_f << "\n# min_witnesses";
        for (u64 p : h.min_witnesses) out << ' ' << p;
        out << "\n";
      }
      return kExitOk;
    }

    if (*heur_cmd) {
      if (h_p != 0) {
        if (h_p <= 5) throw UsageError("--p must be > 5");
        const HeuristicEstimate e = heuristic(h_p);
        if (json) {
          out << nlohmann::json{{"p", e.p},
                                {"log_exact", e.log_exact},
                                {"exact", e.exact_scientific().str(12)},
                                {"log_limit", e.log_limit},
                                {"limit", e.limit_scientific().str(12)},
                                {"limit_symbolic", e.limit_symbolic()}}
                     .dump()
              << "\n";
        } else {
          out << "p            " << e.p << "\n"
              << "exact        (1 - 1/" << e.p << ")^" << (e.p - 3) * (e.p - 4) / 2 << " = "
              << e.exact_scientific().str(12) << "\n"
              << "limit        " << e.limit_symbolic() << " = " << e.limit_scientific().str(12)
              << "\n";
        }
        return kExitOk;
      }
      if (h_from == 0 || h_to == 0) throw UsageError("give --p or both --from and --to");
      if (h_from < 7) throw UsageError("--from must be >= 7");
      if (h_from >= h_to) throw UsageError("--from must be < --to");
      const ExpectedCount c = expected_count(h_from, h_to);
      if (json)
        out << nlohmann::json{{"from", h_from},
                              {"to", h_to},
                              {"terms", c.terms},
                              {"log_expected", c.log_value},
                              {"expected", c.scientific().str(12)}}
                   .dump()
            << "\n";
      else
        out << "expected count over " << c.terms << " primes in [" << h_from << ", " << h_to
            << ") = " << c.scientific().str(12) << "\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace socialist::cli
