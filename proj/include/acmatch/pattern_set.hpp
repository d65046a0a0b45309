#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace acmatch {

using PatternId = std::uint32_t;

/// Ordered list of distinct, non-empty byte strings. A pattern's id is its
/// index in the list.
class PatternSet {
 public:
  /// Throws PatternError on an empty list, an empty pattern or a duplicate;
  /// the error carries the index of the offending pattern.
  explicit PatternSet(std::vector<std::string> patterns);

  /// Parses the pattern file format: one pattern per line, LF or CRLF
  /// terminated, final terminator optional, empty lines rejected.
  static PatternSet parse(std::string_view contents);
  static PatternSet load(const std::filesystem::path& path);

  /// Inverse of parse(). Patterns containing LF cannot be represented and
  /// throw PatternError.
  std::string serialize() const;

  std::size_t size() const noexcept { return patterns_.size(); }
  const std::string& operator[](PatternId id) const { return patterns_[id]; }
  const std::vector<std::string>& patterns() const noexcept { return patterns_; }
  std::size_t max_length() const noexcept { return max_length_; }

  auto begin() const noexcept { return patterns_.begin(); }
  auto end() const noexcept { return patterns_.end(); }

  friend bool operator==(const PatternSet&, const PatternSet&) = default;

 private:
  std::vector<std::string> patterns_;
  std::size_t max_length_ = 0;
};

}  // namespace acmatch
