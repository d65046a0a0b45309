#include "acmatch/byte_scan.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>

namespace {

using acmatch::ByteClass;
using acmatch::ScanIsa;

ByteClass random_class(std::mt19937_64& rng) {
  ByteClass set;
  // Mix of sparse, dense and single-half classes.
  const unsigned mode = rng() % 4;
  const unsigned members = mode == 0 ? 1 + rng() % 3 : mode == 1 ? 1 + rng() % 40 : 100 + rng() % 156;
  for (unsigned i = 0; i < members; ++i) {
    auto b = static_cast<std::uint8_t>(rng());
    if (mode == 3) b |= 0x80;
    set.insert(b);
  }
  return set;
}

std::string random_text(std::mt19937_64& rng, std::size_t n) {
  std::string s(n, '\0');
  for (char& c : s) c = static_cast<char>(rng());
  return s;
}

}  // namespace

TEST(ByteClass, MembershipAndNibbleTablesAgree) {
  std::mt19937_64 rng(3);
  for (int iter = 0; iter < 100; ++iter) {
    const ByteClass set = random_class(rng);
    std::size_t count = 0;
    for (unsigned b = 0; b < 256; ++b) {
      const unsigned hi = b >> 4, lo = b & 15;
      const bool via_tables = hi < 8 ? (set.low_table()[lo] >> hi) & 1 : (set.high_table()[lo] >> (hi - 8)) & 1;
      EXPECT_EQ(set.contains(static_cast<std::uint8_t>(b)), via_tables) << b;
      count += set.contains(static_cast<std::uint8_t>(b));
    }
    EXPECT_EQ(set.count(), count);
  }
}

TEST(ByteScan, EmptyClassNeverMatches) {
  const std::string text(100, 'x');
  const auto* data = reinterpret_cast<const std::uint8_t*>(text.data());
  EXPECT_EQ(acmatch::scan::find_first_scalar(data, 0, text.size(), ByteClass{}), text.size());
  EXPECT_EQ(acmatch::scan::find_first_avx2(data, 0, text.size(), ByteClass{}), text.size());
}

TEST(ByteScan, HighBitBytes) {
  ByteClass set;
  set.insert(0xFF);
  set.insert(0x80);
  std::string text(70, '\x7f');
  text[33] = '\x80';
  text[65] = '\xff';
  const auto* data = reinterpret_cast<const std::uint8_t*>(text.data());
  EXPECT_EQ(acmatch::scan::find_first_avx2(data, 0, text.size(), set), 33u);
  EXPECT_EQ(acmatch::scan::find_first_avx2(data, 34, text.size(), set), 65u);
  EXPECT_EQ(acmatch::scan::find_first_avx2(data, 34, 65, set), 65u);
}

// The vector kernel must agree with the scalar reference on every input,
// including unaligned starts and ranges shorter than one vector.
TEST(ByteScan, Avx2MatchesScalarOnRandomInputs) {
  if (!acmatch::isa_available(ScanIsa::kAvx2)) GTEST_SKIP() << "AVX2 not available";
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 2000; ++iter) {
    const ByteClass set = random_class(rng);
    const std::string text = random_text(rng, rng() % 300);
    const auto* data = reinterpret_cast<const std::uint8_t*>(text.data());
    const std::size_t last = text.empty() ? 0 : rng() % (text.size() + 1);
    const std::size_t from = last == 0 ? 0 : rng() % (last + 1);
    ASSERT_EQ(acmatch::scan::find_first_avx2(data, from, last, set),
              acmatch::scan::find_first_scalar(data, from, last, set))
        << "iter " << iter;
  }
}

TEST(ByteScan, DispatchedScanMatchesScalarAndWalksAllHits) {
  std::mt19937_64 rng(5);
  const ByteClass set = random_class(rng);
  const std::string text = random_text(rng, 4096);
  const auto* data = reinterpret_cast<const std::uint8_t*>(text.data());
  std::size_t hits = 0;
  for (std::size_t i = acmatch::find_first_in(text, 0, text.size(), set); i < text.size();
       i = acmatch::find_first_in(text, i + 1, text.size(), set)) {
    ASSERT_TRUE(set.contains(data[i]));
    ++hits;
  }
  std::size_t expected = 0;
  for (char c : text) expected += set.contains(static_cast<std::uint8_t>(c));
  EXPECT_EQ(hits, expected);
}

TEST(ByteScan, ActiveIsaIsAvailable) {
  EXPECT_TRUE(acmatch::isa_available(acmatch::active_isa()));
  EXPECT_TRUE(acmatch::isa_available(ScanIsa::kScalar));
}
