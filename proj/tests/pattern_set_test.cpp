#include "acmatch/pattern_set.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "acmatch/error.hpp"

using acmatch::PatternError;
using acmatch::PatternSet;

TEST(PatternSet, IdsAreListPositions) {
  PatternSet set({"AB", "ABG", "BEDE", "ED"});
  ASSERT_EQ(set.size(), 4u);
  EXPECT_EQ(set[0], "AB");
  EXPECT_EQ(set[3], "ED");
  EXPECT_EQ(set.max_length(), 4u);
}

TEST(PatternSet, RejectsEmptySet) {
  EXPECT_THROW(PatternSet(std::vector<std::string>{}), PatternError);
}

TEST(PatternSet, RejectsEmptyPatternWithIndex) {
  try {
    PatternSet({"A", "", "B"});
    FAIL() << "expected PatternError";
  } catch (const PatternError& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(PatternSet, RejectsDuplicateWithIndex) {
  try {
    PatternSet({"AB", "AB"});
    FAIL() << "expected PatternError";
  } catch (const PatternError& e) {
    EXPECT_EQ(e.index(), 1u);
    EXPECT_NE(std::string(e.what()).find("AB"), std::string::npos);
  }
}

TEST(PatternSet, ParseHandlesLfCrlfAndMissingFinalTerminator) {
  EXPECT_EQ(PatternSet::parse("AB\nABG\r\nBEDE\nED"), PatternSet({"AB", "ABG", "BEDE", "ED"}));
  EXPECT_EQ(PatternSet::parse("x\n"), PatternSet({"x"}));
}

TEST(PatternSet, ParseKeepsRawBytes) {
  const std::string bytes{"\x00\xff\t \x01", 5};
  EXPECT_EQ(PatternSet::parse(bytes + "\n")[0], bytes);
  // A CR that is not part of the terminator stays in the pattern.
  EXPECT_EQ(PatternSet::parse("a\rb\n")[0], "a\rb");
}

TEST(PatternSet, ParseRejectsEmptyLines) {
  EXPECT_THROW(PatternSet::parse("a\n\nb\n"), PatternError);
  EXPECT_THROW(PatternSet::parse("a\n\r\n"), PatternError);
  EXPECT_THROW(PatternSet::parse(""), PatternError);
  EXPECT_THROW(PatternSet::parse("\n"), PatternError);
}

TEST(PatternSet, LoadMissingFileIsIoError) {
  EXPECT_THROW(PatternSet::load("/nonexistent/dir/patterns.txt"), acmatch::IoError);
}

TEST(PatternSet, SerializeRoundTripsRandomSets) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<std::string> patterns;
    std::set<std::string> seen;
    const int n = 1 + static_cast<int>(rng() % 10);
    while (static_cast<int>(patterns.size()) < n) {
      std::string p(1 + rng() % 12, '\0');
      for (char& c : p) {
        do {
          c = static_cast<char>(rng() % 256);
        } while (c == '\n');
      }
      if (p.back() == '\r') p.back() = 'x';
      if (seen.insert(p).second) patterns.push_back(p);
    }
    const PatternSet set(patterns);
    EXPECT_EQ(PatternSet::parse(set.serialize()), set);
  }
}

TEST(PatternSet, SerializeRejectsUnrepresentablePatterns) {
  EXPECT_THROW(PatternSet({"a\nb"}).serialize(), PatternError);
  EXPECT_THROW(PatternSet({"ab\r"}).serialize(), PatternError);
}
