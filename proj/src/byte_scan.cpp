#include "acmatch/byte_scan.hpp"

#include <bit>

namespace acmatch {

void ByteClass::insert(std::uint8_t byte) noexcept {
  bits_[byte >> 6] |= std::uint64_t{1} << (byte & 63);
  const std::uint8_t hi = byte >> 4;
  const std::uint8_t lo = byte & 0x0F;
  if (hi < 8) {
    low_[lo] |= static_cast<std::uint8_t>(1u << hi);
  } else {
    high_[lo] |= static_cast<std::uint8_t>(1u << (hi - 8));
  }
}

std::size_t ByteClass::count() const noexcept {
  std::size_t n = 0;
  for (auto word : bits_) n += std::popcount(word);
  return n;
}

std::string_view isa_name(ScanIsa isa) noexcept {
  switch (isa) {
    case ScanIsa::kScalar:
      return "scalar";
    case ScanIsa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(ScanIsa isa) noexcept {
  switch (isa) {
    case ScanIsa::kScalar:
      return true;
    case ScanIsa::kAvx2:
#if defined(ACMATCH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

ScanIsa active_isa() noexcept {
  static const ScanIsa isa = isa_available(ScanIsa::kAvx2) ? ScanIsa::kAvx2 : ScanIsa::kScalar;
  return isa;
}

namespace scan {

std::size_t find_first_scalar(const std::uint8_t* data, std::size_t from, std::size_t last,
                              const ByteClass& set) noexcept {
  for (std::size_t i = from; i < last; ++i) {
    if (set.contains(data[i])) return i;
  }
  return last;
}

}  // namespace scan

std::size_t find_first_in(std::string_view text, std::size_t from, std::size_t last,
                          const ByteClass& set) noexcept {
  const auto* data = reinterpret_cast<const std::uint8_t*>(text.data());
  // Dense classes (most workloads) almost always hit on the first byte.
  if (from < last && set.contains(data[from])) return from;
  if (active_isa() == ScanIsa::kAvx2) {
    return scan::find_first_avx2(data, from, last, set);
  }
  return scan::find_first_scalar(data, from, last, set);
}

}  // namespace acmatch
