#pragma once

// Aho-Corasick pattern-matching machine (goto, failure and output functions)
// and the failure-less trie used by the per-start-position engine.
//
// States are numbered canonically: breadth-first from the root, children in
// ascending byte order. Because BFS order is also non-decreasing depth, the
// parent of a state and its failure target always have a smaller id.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "acmatch/byte_scan.hpp"
#include "acmatch/pattern_set.hpp"

namespace acmatch {

using StateId = std::uint32_t;

inline constexpr StateId kRoot = 0;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();
inline constexpr PatternId kNoPattern = std::numeric_limits<PatternId>::max();

/// Goto function. States at depth 0 and 1 own a dense 256-entry row; deeper
/// states keep their outgoing edges as sorted (byte, state) pairs.
class GotoTable {
 public:
  struct Edge {
    std::uint8_t byte;
    StateId target;
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  GotoTable() = default;

  /// `children[s]` lists the edges of state s sorted by byte; `depth[s]` is
  /// non-decreasing in s.
  GotoTable(const std::vector<std::vector<Edge>>& children,
            std::vector<std::uint32_t> depth);

  StateId step(StateId state, std::uint8_t byte) const noexcept {
    if (state < dense_states_) {
      return dense_[static_cast<std::size_t>(state) * 256 + byte];
    }
    const auto* first = edges_.data() + edge_begin_[state];
    const auto* last = edges_.data() + edge_begin_[state + 1];
    for (; first != last; ++first) {
      if (first->byte >= byte) {
        return first->byte == byte ? first->target : kNoState;
      }
    }
    return kNoState;
  }

  std::size_t state_count() const noexcept { return depth_.size(); }
  std::uint32_t depth(StateId state) const noexcept { return depth_[state]; }
  std::size_t dense_states() const noexcept { return dense_states_; }

  /// Outgoing edges of `state` in ascending byte order.
  std::vector<Edge> edges(StateId state) const;

  friend bool operator==(const GotoTable&, const GotoTable&) = default;

 private:
  std::vector<std::uint32_t> depth_;
  std::uint32_t dense_states_ = 0;
  std::vector<StateId> dense_;
  std::vector<std::uint32_t> edge_begin_;  // indexed by state, sparse states only used
  std::vector<Edge> edges_;
};

/// Trie of all pattern prefixes, no failure links.
class FailurelessTrie {
 public:
  FailurelessTrie(GotoTable table, std::vector<PatternId> final_ids,
                  std::vector<std::uint32_t> pattern_lengths);

  std::size_t state_count() const noexcept { return goto_.state_count(); }
  StateId step(StateId state, std::uint8_t byte) const noexcept {
    return goto_.step(state, byte);
  }
  std::uint32_t depth(StateId state) const noexcept { return goto_.depth(state); }
  const GotoTable& goto_table() const noexcept { return goto_; }

  /// Pattern spelled exactly by the root->state path, or kNoPattern.
  PatternId final_pattern(StateId state) const noexcept { return final_[state]; }

  std::size_t pattern_count() const noexcept { return lengths_.size(); }
  std::uint32_t pattern_length(PatternId id) const noexcept { return lengths_[id]; }
  std::uint32_t max_pattern_length() const noexcept { return max_length_; }

  /// Bytes with a goto transition out of the root.
  const ByteClass& root_bytes() const noexcept { return root_bytes_; }

  friend bool operator==(const FailurelessTrie& a, const FailurelessTrie& b) {
    return a.goto_ == b.goto_ && a.final_ == b.final_ && a.lengths_ == b.lengths_;
  }

 private:
  GotoTable goto_;
  std::vector<PatternId> final_;
  std::vector<std::uint32_t> lengths_;
  std::uint32_t max_length_ = 0;
  ByteClass root_bytes_;
};

using FailureLinks = std::vector<StateId>;

/// Output function stored failure-closed: outputs(s) holds every pattern that
/// is a suffix of the string spelled by s, ids ascending.
class OutputSets {
 public:
  OutputSets() = default;
  OutputSets(std::vector<std::uint32_t> offsets, std::vector<PatternId> ids);

  std::span<const PatternId> operator[](StateId state) const noexcept {
    return {ids_.data() + offsets_[state], ids_.data() + offsets_[state + 1]};
  }
  std::size_t state_count() const noexcept {
    return offsets_.empty() ? 0 : offsets_.size() - 1;
  }

  friend bool operator==(const OutputSets&, const OutputSets&) = default;

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<PatternId> ids_;
};

class AcAutomaton {
 public:
  /// Assembles an automaton from its parts. Throws ContractViolation when the
  /// failure links or output sets do not cover every trie state.
  AcAutomaton(FailurelessTrie trie, FailureLinks failure, OutputSets outputs);

  const FailurelessTrie& trie() const noexcept { return trie_; }
  std::size_t state_count() const noexcept { return trie_.state_count(); }
  StateId step(StateId state, std::uint8_t byte) const noexcept {
    return trie_.step(state, byte);
  }
  StateId failure(StateId state) const noexcept { return failure_[state]; }
  std::span<const PatternId> outputs(StateId state) const noexcept {
    return outputs_[state];
  }
  std::uint32_t depth(StateId state) const noexcept { return trie_.depth(state); }
  std::uint32_t pattern_length(PatternId id) const noexcept {
    return trie_.pattern_length(id);
  }
  std::size_t pattern_count() const noexcept { return trie_.pattern_count(); }

 private:
  FailurelessTrie trie_;
  FailureLinks failure_;
  OutputSets outputs_;
};

/// Builds the goto skeleton and final-state map. The result does not depend
/// on pattern order beyond the ids stored in final states.
FailurelessTrie build_trie(const PatternSet& patterns);

/// Failure links, computed breadth-first from the root.
FailureLinks build_failure(const FailurelessTrie& trie);

/// Failure-closed output sets: own final id united with the outputs of the
/// failure target, in BFS order.
OutputSets build_output(const FailurelessTrie& trie, std::span<const StateId> failure);

AcAutomaton build_automaton(FailurelessTrie trie);
AcAutomaton build_automaton(const PatternSet& patterns);

}  // namespace acmatch
