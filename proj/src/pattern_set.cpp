#include "acmatch/pattern_set.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>

#include "acmatch/error.hpp"

namespace acmatch {

PatternSet::PatternSet(std::vector<std::string> patterns) : patterns_(std::move(patterns)) {
  if (patterns_.empty()) {
    throw PatternError("pattern set is empty");
  }
  std::unordered_map<std::string_view, std::size_t> seen;
  seen.reserve(patterns_.size());
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    const std::string& p = patterns_[i];
    if (p.empty()) {
      throw PatternError("pattern " + std::to_string(i) + " is empty", i);
    }
    auto [it, inserted] = seen.emplace(p, i);
    if (!inserted) {
      throw PatternError("pattern " + std::to_string(i) + " duplicates pattern " +
                             std::to_string(it->second) + " (\"" + p + "\")",
                         i);
    }
    max_length_ = std::max(max_length_, p.size());
  }
}

PatternSet PatternSet::parse(std::string_view contents) {
  std::vector<std::string> patterns;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    std::size_t next = eol == std::string_view::npos ? contents.size() : eol + 1;
    std::string_view line = contents.substr(pos, (eol == std::string_view::npos ? contents.size() : eol) - pos);
    if (eol != std::string_view::npos && !line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (line.empty()) {
      throw PatternError("line " + std::to_string(patterns.size() + 1) + " is empty",
                         patterns.size());
    }
    patterns.emplace_back(line);
    pos = next;
  }
  return PatternSet(std::move(patterns));
}

PatternSet PatternSet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open pattern file " + path.string());
  }
  std::string contents{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) {
    throw IoError("cannot read pattern file " + path.string());
  }
  return parse(contents);
}

std::string PatternSet::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    const std::string& p = patterns_[i];
    // A trailing CR would be eaten as part of a CRLF terminator.
    if (p.find('\n') != std::string::npos || p.back() == '\r') {
      throw PatternError("pattern " + std::to_string(i) + " cannot be written as a line", i);
    }
    out += p;
    out += '\n';
  }
  return out;
}

}  // namespace acmatch
