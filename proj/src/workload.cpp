#include "acmatch/workload.hpp"

#include <limits>
#include <random>
#include <unordered_set>
#include <vector>

#include "acmatch/error.hpp"

namespace acmatch {

namespace {

// Uniform integer in [0, bound] by rejection. std::uniform_int_distribution is
// implementation-defined, so it would break cross-platform reproducibility.
std::uint64_t draw_at_most(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t range = bound + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % range;
}

std::string random_permutation(std::mt19937_64& rng) {
  std::string p(kAlphabet);
  for (std::size_t i = p.size() - 1; i > 0; --i) {
    std::swap(p[i], p[draw_at_most(rng, i)]);
  }
  return p;
}

}  // namespace

std::string gen_text(std::size_t size) {
  std::string text(size, '\0');
  for (std::size_t i = 0; i < size; ++i) text[i] = kAlphabet[i % kAlphabet.size()];
  return text;
}

PatternSet gen_patterns(std::size_t count, std::uint64_t seed) {
  if (count == 0) {
    throw ContractViolation("gen_patterns: pattern count must be positive");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::string> patterns;
  patterns.reserve(count);
  patterns.emplace_back(kAlphabet);
  std::unordered_set<std::string> seen{patterns.front()};
  while (patterns.size() < count) {
    std::string p = random_permutation(rng);
    if (seen.insert(p).second) patterns.push_back(std::move(p));
  }
  return PatternSet(std::move(patterns));
}

}  // namespace acmatch
