#include "acmatch/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "acmatch/error.hpp"

namespace acmatch {

GotoTable::GotoTable(const std::vector<std::vector<Edge>>& children,
                     std::vector<std::uint32_t> depth)
    : depth_(std::move(depth)) {
  if (children.size() != depth_.size() || depth_.empty()) {
    throw ContractViolation("goto table: children and depth disagree");
  }
  const std::size_t n = depth_.size();
  while (dense_states_ < n && depth_[dense_states_] <= 1) ++dense_states_;

  dense_.assign(static_cast<std::size_t>(dense_states_) * 256, kNoState);
  edge_begin_.assign(n + 1, 0);
  for (std::size_t s = 0; s < n; ++s) {
    edge_begin_[s] = static_cast<std::uint32_t>(edges_.size());
    if (s < dense_states_) {
      for (const Edge& e : children[s]) dense_[s * 256 + e.byte] = e.target;
    } else {
      edges_.insert(edges_.end(), children[s].begin(), children[s].end());
    }
  }
  edge_begin_[n] = static_cast<std::uint32_t>(edges_.size());
}

std::vector<GotoTable::Edge> GotoTable::edges(StateId state) const {
  std::vector<Edge> out;
  if (state < dense_states_) {
    const StateId* row = dense_.data() + static_cast<std::size_t>(state) * 256;
    for (unsigned b = 0; b < 256; ++b) {
      if (row[b] != kNoState) out.push_back({static_cast<std::uint8_t>(b), row[b]});
    }
  } else {
    out.assign(edges_.begin() + edge_begin_[state], edges_.begin() + edge_begin_[state + 1]);
  }
  return out;
}

FailurelessTrie::FailurelessTrie(GotoTable table, std::vector<PatternId> final_ids,
                                 std::vector<std::uint32_t> pattern_lengths)
    : goto_(std::move(table)), final_(std::move(final_ids)), lengths_(std::move(pattern_lengths)) {
  if (final_.size() != goto_.state_count()) {
    throw ContractViolation("trie: final map does not cover every state");
  }
  for (auto len : lengths_) max_length_ = std::max(max_length_, len);
  for (const auto& e : goto_.edges(kRoot)) root_bytes_.insert(e.byte);
}

OutputSets::OutputSets(std::vector<std::uint32_t> offsets, std::vector<PatternId> ids)
    : offsets_(std::move(offsets)), ids_(std::move(ids)) {
  if (offsets_.empty() || offsets_.back() != ids_.size()) {
    throw ContractViolation("output sets: offsets do not match id list");
  }
}

AcAutomaton::AcAutomaton(FailurelessTrie trie, FailureLinks failure, OutputSets outputs)
    : trie_(std::move(trie)), failure_(std::move(failure)), outputs_(std::move(outputs)) {
  if (failure_.size() != trie_.state_count() || outputs_.state_count() != trie_.state_count()) {
    throw ContractViolation("automaton: failure or output function does not cover every state");
  }
}

FailurelessTrie build_trie(const PatternSet& patterns) {
  // Insertion trie, then renumber breadth-first with ascending bytes.
  struct Node {
    std::map<std::uint8_t, std::uint32_t> next;
    PatternId final_id = kNoPattern;
  };
  std::vector<Node> nodes(1);
  for (PatternId id = 0; id < patterns.size(); ++id) {
    std::uint32_t cur = 0;
    for (char c : patterns[id]) {
      const auto byte = static_cast<std::uint8_t>(c);
      auto it = nodes[cur].next.find(byte);
      if (it == nodes[cur].next.end()) {
        nodes.emplace_back();
        it = nodes[cur].next.emplace(byte, static_cast<std::uint32_t>(nodes.size() - 1)).first;
      }
      cur = it->second;
    }
    nodes[cur].final_id = id;
  }

  std::vector<std::uint32_t> order;  // canonical id -> insertion index
  std::vector<StateId> canonical(nodes.size(), kNoState);
  std::vector<std::uint32_t> depth;
  order.reserve(nodes.size());
  depth.reserve(nodes.size());
  order.push_back(0);
  depth.push_back(0);
  canonical[0] = kRoot;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const auto& [byte, child] : nodes[order[head]].next) {
      canonical[child] = static_cast<StateId>(order.size());
      order.push_back(child);
      depth.push_back(depth[head] + 1);
    }
  }

  std::vector<std::vector<GotoTable::Edge>> children(nodes.size());
  std::vector<PatternId> finals(nodes.size(), kNoPattern);
  for (std::size_t s = 0; s < order.size(); ++s) {
    const Node& node = nodes[order[s]];
    finals[s] = node.final_id;
    children[s].reserve(node.next.size());
    for (const auto& [byte, child] : node.next) children[s].push_back({byte, canonical[child]});
  }

  std::vector<std::uint32_t> lengths;
  lengths.reserve(patterns.size());
  for (const auto& p : patterns) lengths.push_back(static_cast<std::uint32_t>(p.size()));

  return FailurelessTrie(GotoTable(children, std::move(depth)), std::move(finals), std::move(lengths));
}

FailureLinks build_failure(const FailurelessTrie& trie) {
  const std::size_t n = trie.state_count();
  FailureLinks failure(n, kRoot);
  // Canonical ids are BFS order, so every parent (and every failure target,
  // which is strictly shallower) is finished before its children.
  for (StateId s = 0; s < n; ++s) {
    for (const auto& [byte, child] : trie.goto_table().edges(s)) {
      if (s == kRoot) {
        failure[child] = kRoot;
        continue;
      }
      StateId f = failure[s];
      StateId next = trie.step(f, byte);
      while (next == kNoState && f != kRoot) {
        f = failure[f];
        next = trie.step(f, byte);
      }
      failure[child] = next == kNoState ? kRoot : next;
    }
  }
  return failure;
}

OutputSets build_output(const FailurelessTrie& trie, std::span<const StateId> failure) {
  const std::size_t n = trie.state_count();
  if (failure.size() != n) {
    throw ContractViolation("build_output: failure links do not cover every state");
  }
  std::vector<std::uint32_t> offsets(n + 1, 0);
  std::vector<PatternId> ids;
  for (StateId s = 0; s < n; ++s) {
    offsets[s] = static_cast<std::uint32_t>(ids.size());
    if (s == kRoot) continue;
    const StateId f = failure[s];
    if (f >= s) {
      throw ContractViolation("build_output: failure link does not point to an earlier state");
    }
    const auto inherited_begin = ids.begin() + offsets[f];
    const auto inherited_end = ids.begin() + offsets[f + 1];
    std::vector<PatternId> merged(inherited_begin, inherited_end);
    if (const PatternId own = trie.final_pattern(s); own != kNoPattern) {
      merged.insert(std::lower_bound(merged.begin(), merged.end(), own), own);
    }
    ids.insert(ids.end(), merged.begin(), merged.end());
  }
  offsets[n] = static_cast<std::uint32_t>(ids.size());
  return OutputSets(std::move(offsets), std::move(ids));
}

AcAutomaton build_automaton(FailurelessTrie trie) {
  FailureLinks failure = build_failure(trie);
  OutputSets outputs = build_output(trie, failure);
  return AcAutomaton(std::move(trie), std::move(failure), std::move(outputs));
}

AcAutomaton build_automaton(const PatternSet& patterns) {
  return build_automaton(build_trie(patterns));
}

}  // namespace acmatch
