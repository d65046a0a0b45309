#pragma once

// Matching engines.
//
// match_serial runs the full Aho-Corasick machine in one left-to-right pass.
// match_parallel runs one independent failure-less walk per text start
// position; start positions are split into contiguous blocks over a pool of
// worker threads. Both return events sorted by (start, pattern_id).

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "acmatch/automaton.hpp"

namespace acmatch {

struct MatchEvent {
  PatternId pattern_id = 0;
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // exclusive

  friend bool operator==(const MatchEvent&, const MatchEvent&) = default;
};

/// Orders by (start, pattern_id).
inline bool event_before(const MatchEvent& a, const MatchEvent& b) noexcept {
  return a.start != b.start ? a.start < b.start : a.pattern_id < b.pattern_id;
}

enum class MatchSemantics {
  kAllMatches,
  // One event per start offset: the longest pattern found there. This is
  // what a failure-less engine without sub-pattern tracking reports.
  kLongestPerStart,
};

std::string_view semantics_name(MatchSemantics semantics) noexcept;

/// Fixed set of worker threads for fork-join jobs. The calling thread acts as
/// worker 0, so a pool of size 1 owns no threads. Concurrent run() calls on
/// one pool are serialized.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const noexcept { return threads_.size() + 1; }

  /// Calls job(w) once for every w in [0, size()) and returns when all calls
  /// have finished. The first exception thrown by a job is rethrown.
  void run(const std::function<void(std::size_t)>& job);

 private:
  void worker_loop(std::size_t index);

  std::vector<std::thread> threads_;
  std::mutex run_mutex_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stopping_ = false;
  std::exception_ptr error_;
};

std::vector<MatchEvent> match_serial(const AcAutomaton& automaton, std::string_view text);

/// Single failure-less walk from `start`: follows goto transitions until one
/// is missing or the text ends. Throws ContractViolation if start > text.size().
std::vector<MatchEvent> walk_from(const FailurelessTrie& trie, std::string_view text,
                                  std::size_t start, MatchSemantics semantics);

/// Number of text bytes the walk from `start` reads, including the byte that
/// has no transition.
std::size_t walk_extent(const FailurelessTrie& trie, std::string_view text,
                        std::size_t start);

std::vector<MatchEvent> match_parallel(
    const FailurelessTrie& trie, std::string_view text, WorkerPool& pool,
    MatchSemantics semantics = MatchSemantics::kLongestPerStart);

/// Convenience overload that spins up a pool for one call. Throws
/// ContractViolation when workers == 0.
std::vector<MatchEvent> match_parallel(
    const FailurelessTrie& trie, std::string_view text, std::size_t workers,
    MatchSemantics semantics = MatchSemantics::kLongestPerStart);

/// Keeps the longest event per start offset. Input must be sorted by
/// (start, pattern_id).
std::vector<MatchEvent> keep_longest_per_start(std::span<const MatchEvent> events);

// Match list text format: "start\tend\tpattern_id\n" per event.
void write_matches(std::ostream& out, std::span<const MatchEvent> events);
std::string format_matches(std::span<const MatchEvent> events);

}  // namespace acmatch
