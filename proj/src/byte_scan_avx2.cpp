// Built with -mavx2 on x86-64. Only reached through the runtime dispatch in
// byte_scan.cpp or directly from the equivalence tests.

#include "acmatch/byte_scan.hpp"

#if defined(ACMATCH_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace acmatch::scan {

#if defined(ACMATCH_HAVE_AVX2)

namespace {

__m256i broadcast_table(const std::array<std::uint8_t, 16>& table) {
  const __m128i t = _mm_loadu_si128(reinterpret_cast<const __m128i*>(table.data()));
  return _mm256_broadcastsi128_si256(t);
}

}  // namespace

// Nibble classification: the low nibble picks a row of 8 membership bits from
// one of two tables (sign bit of the byte selects the table), the high nibble
// picks the bit within the row.
std::size_t find_first_avx2(const std::uint8_t* data, std::size_t from, std::size_t last,
                            const ByteClass& set) noexcept {
  const __m256i low_rows = broadcast_table(set.low_table());
  const __m256i high_rows = broadcast_table(set.high_table());
  const __m256i bit_of_nibble =
      _mm256_setr_epi8(1, 2, 4, 8, 16, 32, 64, -128, 1, 2, 4, 8, 16, 32, 64, -128,  //
                       1, 2, 4, 8, 16, 32, 64, -128, 1, 2, 4, 8, 16, 32, 64, -128);
  const __m256i nibble = _mm256_set1_epi8(0x0F);
  const __m256i zero = _mm256_setzero_si256();

  std::size_t i = from;
  for (; i + 32 <= last; i += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    const __m256i lo = _mm256_and_si256(v, nibble);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), nibble);
    const __m256i row = _mm256_blendv_epi8(_mm256_shuffle_epi8(low_rows, lo),
                                           _mm256_shuffle_epi8(high_rows, lo), v);
    const __m256i hit = _mm256_and_si256(row, _mm256_shuffle_epi8(bit_of_nibble, hi));
    const auto miss = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(hit, zero)));
    if (miss != 0xFFFFFFFFu) {
      return i + static_cast<std::size_t>(__builtin_ctz(~miss));
    }
  }
  return find_first_scalar(data, i, last, set);
}

#else

std::size_t find_first_avx2(const std::uint8_t* data, std::size_t from, std::size_t last,
                            const ByteClass& set) noexcept {
  return find_first_scalar(data, from, last, set);
}

#endif

}  // namespace acmatch::scan
