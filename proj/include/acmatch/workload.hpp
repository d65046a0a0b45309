#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "acmatch/pattern_set.hpp"

namespace acmatch {

inline constexpr std::string_view kAlphabet = "abcdefghijklmnopqrstuvwxyz";

/// Identifies the pattern generator so sweeps can record it: std::mt19937_64
/// seeded with the 64-bit seed, bounded draws by rejection sampling, and a
/// Fisher-Yates shuffle from the last index down.
inline constexpr std::string_view kPatternRngId = "mt19937_64/rejection/fisher-yates-desc";

struct WorkloadSpec {
  std::size_t text_size = 0;
  std::size_t pattern_count = 1;
  std::uint64_t seed = 0;
};

/// The alphabet repeated and truncated to exactly `size` bytes.
std::string gen_text(std::size_t size);

/// Pattern 0 is the alphabet itself; patterns 1..count-1 are distinct random
/// permutations of it. Deterministic in (count, seed) on every platform.
/// Throws ContractViolation when count == 0.
PatternSet gen_patterns(std::size_t count, std::uint64_t seed);

}  // namespace acmatch
