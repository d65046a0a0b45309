#include "acmatch/engines.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <utility>

#include "acmatch/error.hpp"

namespace acmatch {

std::string_view semantics_name(MatchSemantics semantics) noexcept {
  switch (semantics) {
    case MatchSemantics::kAllMatches:
      return "all";
    case MatchSemantics::kLongestPerStart:
      return "longest";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// WorkerPool

WorkerPool::WorkerPool(std::size_t workers) {
  if (workers == 0) {
    throw ContractViolation("worker pool needs at least one worker");
  }
  threads_.reserve(workers - 1);
  for (std::size_t i = 1; i < workers; ++i) {
    threads_.emplace_back([this, i] { worker_loop(i); });
  }
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::worker_loop(std::size_t index) {
  std::size_t seen = 0;
  for (;;) {
    const std::function<void(std::size_t)>* job = nullptr;
    {
      std::unique_lock lock(mutex_);
      wake_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
      job = job_;
    }
    std::exception_ptr error;
    try {
      (*job)(index);
    } catch (...) {
      error = std::current_exception();
    }
    std::lock_guard lock(mutex_);
    if (error && !error_) error_ = error;
    if (--pending_ == 0) done_.notify_one();
  }
}

void WorkerPool::run(const std::function<void(std::size_t)>& job) {
  std::lock_guard serial(run_mutex_);
  {
    std::lock_guard lock(mutex_);
    job_ = &job;
    pending_ = threads_.size();
    error_ = nullptr;
    ++generation_;
  }
  wake_.notify_all();

  std::exception_ptr own_error;
  try {
    job(0);
  } catch (...) {
    own_error = std::current_exception();
  }

  std::unique_lock lock(mutex_);
  done_.wait(lock, [&] { return pending_ == 0; });
  job_ = nullptr;
  if (own_error) std::rethrow_exception(own_error);
  if (error_) std::rethrow_exception(std::exchange(error_, nullptr));
}

// ---------------------------------------------------------------------------
// Serial Aho-Corasick

std::vector<MatchEvent> match_serial(const AcAutomaton& automaton, std::string_view text) {
  std::vector<MatchEvent> events;
  const auto* data = reinterpret_cast<const std::uint8_t*>(text.data());
  const std::size_t n = text.size();
  const ByteClass& root_bytes = automaton.trie().root_bytes();

  StateId state = kRoot;
  for (std::size_t i = 0; i < n; ++i) {
    if (state == kRoot) {
      // At the root, bytes without a root transition leave the state unchanged.
      i = find_first_in(text, i, n, root_bytes);
      if (i == n) break;
    }
    const std::uint8_t byte = data[i];
    StateId next = automaton.step(state, byte);
    while (next == kNoState && state != kRoot) {
      state = automaton.failure(state);
      next = automaton.step(state, byte);
    }
    state = next == kNoState ? kRoot : next;
    for (PatternId id : automaton.outputs(state)) {
      const std::size_t end = i + 1;
      events.push_back({id, end - automaton.pattern_length(id), end});
    }
  }
  std::sort(events.begin(), events.end(), event_before);
  return events;
}

// ---------------------------------------------------------------------------
// Failure-less walks

namespace {

// Appends the events of one walk, sorted by pattern id.
void walk_into(const FailurelessTrie& trie, const std::uint8_t* data, std::size_t n,
               std::size_t start, MatchSemantics semantics, std::vector<MatchEvent>& out) {
  StateId state = kRoot;
  const std::size_t first = out.size();
  PatternId longest = kNoPattern;
  std::size_t longest_end = 0;
  for (std::size_t i = start; i < n; ++i) {
    state = trie.step(state, data[i]);
    if (state == kNoState) break;
    const PatternId id = trie.final_pattern(state);
    if (id == kNoPattern) continue;
    if (semantics == MatchSemantics::kAllMatches) {
      out.push_back({id, start, i + 1});
    } else {
      longest = id;
      longest_end = i + 1;
    }
  }
  if (semantics == MatchSemantics::kLongestPerStart) {
    if (longest != kNoPattern) out.push_back({longest, start, longest_end});
  } else if (out.size() - first > 1) {
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(), event_before);
  }
}

}  // namespace

std::vector<MatchEvent> walk_from(const FailurelessTrie& trie, std::string_view text,
                                  std::size_t start, MatchSemantics semantics) {
  if (start > text.size()) {
    throw ContractViolation("walk_from: start " + std::to_string(start) +
                            " is past the end of a text of " + std::to_string(text.size()) +
                            " bytes");
  }
  std::vector<MatchEvent> events;
  walk_into(trie, reinterpret_cast<const std::uint8_t*>(text.data()), text.size(), start,
            semantics, events);
  return events;
}

std::size_t walk_extent(const FailurelessTrie& trie, std::string_view text, std::size_t start) {
  if (start > text.size()) {
    throw ContractViolation("walk_extent: start past end of text");
  }
  StateId state = kRoot;
  std::size_t inspected = 0;
  for (std::size_t i = start; i < text.size(); ++i) {
    ++inspected;
    state = trie.step(state, static_cast<std::uint8_t>(text[i]));
    if (state == kNoState) break;
  }
  return inspected;
}

std::vector<MatchEvent> match_parallel(const FailurelessTrie& trie, std::string_view text,
                                       WorkerPool& pool, MatchSemantics semantics) {
  const std::size_t n = text.size();
  if (n == 0) return {};
  const std::size_t workers = pool.size();
  const std::size_t block = (n + workers - 1) / workers;
  const auto* data = reinterpret_cast<const std::uint8_t*>(text.data());
  const ByteClass& root_bytes = trie.root_bytes();

  std::vector<std::vector<MatchEvent>> buffers(workers);
  pool.run([&](std::size_t w) {
    const std::size_t begin = std::min(n, w * block);
    const std::size_t end = std::min(n, begin + block);
    auto& out = buffers[w];
    for (std::size_t pos = begin; pos < end; ++pos) {
      pos = find_first_in(text, pos, end, root_bytes);
      if (pos == end) break;
      walk_into(trie, data, n, pos, semantics, out);
    }
  });

  // Each buffer is sorted (ascending starts, each walk sorted by id) and the
  // blocks are disjoint and ordered, so concatenation keeps the global order.
  std::size_t total = 0;
  for (const auto& b : buffers) total += b.size();
  std::vector<MatchEvent> events;
  events.reserve(total);
  for (auto& b : buffers) events.insert(events.end(), b.begin(), b.end());
  return events;
}

std::vector<MatchEvent> match_parallel(const FailurelessTrie& trie, std::string_view text,
                                       std::size_t workers, MatchSemantics semantics) {
  WorkerPool pool(workers);
  return match_parallel(trie, text, pool, semantics);
}

std::vector<MatchEvent> keep_longest_per_start(std::span<const MatchEvent> events) {
  std::vector<MatchEvent> out;
  for (const MatchEvent& e : events) {
    if (!out.empty() && out.back().start == e.start) {
      if (e.end > out.back().end) out.back() = e;
    } else {
      out.push_back(e);
    }
  }
  return out;
}

void write_matches(std::ostream& out, std::span<const MatchEvent> events) {
  for (const MatchEvent& e : events) {
    out << e.start << '\t' << e.end << '\t' << e.pattern_id << '\n';
  }
}

std::string format_matches(std::span<const MatchEvent> events) {
  std::ostringstream out;
  write_matches(out, events);
  return out.str();
}

}  // namespace acmatch
