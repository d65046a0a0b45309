#pragma once

// Byte-class scanning kernels. The engines use these to skip text positions
// whose byte has no transition out of the root state.
//
// A scalar reference kernel is always available; an AVX2 kernel is compiled
// on x86-64 and selected at runtime when the CPU supports it. Both must
// return identical results for every input.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace acmatch {

/// Set of byte values. Keeps both a plain 256-bit membership bitmap and the
/// nibble lookup tables the vector kernels need.
class ByteClass {
 public:
  ByteClass() = default;

  void insert(std::uint8_t byte) noexcept;
  bool contains(std::uint8_t byte) const noexcept {
    return (bits_[byte >> 6] >> (byte & 63)) & 1u;
  }
  std::size_t count() const noexcept;
  bool empty() const noexcept { return count() == 0; }
  bool full() const noexcept { return count() == 256; }

  // For low nibble `lo`, bit h of low_table()[lo] is set iff byte (h << 4 | lo)
  // is a member, h in 0..7. high_table() covers h in 8..15 the same way.
  const std::array<std::uint8_t, 16>& low_table() const noexcept { return low_; }
  const std::array<std::uint8_t, 16>& high_table() const noexcept { return high_; }

  friend bool operator==(const ByteClass&, const ByteClass&) = default;

 private:
  std::array<std::uint64_t, 4> bits_{};
  std::array<std::uint8_t, 16> low_{};
  std::array<std::uint8_t, 16> high_{};
};

enum class ScanIsa { kScalar, kAvx2 };

std::string_view isa_name(ScanIsa isa) noexcept;

/// True when `isa` can run on this CPU (and was compiled in).
bool isa_available(ScanIsa isa) noexcept;

/// Best kernel for this CPU. Fixed at first call.
ScanIsa active_isa() noexcept;

namespace scan {

// Each kernel returns the smallest i in [from, last) with set.contains(data[i]),
// or `last` when there is none. Requires from <= last.
std::size_t find_first_scalar(const std::uint8_t* data, std::size_t from,
                              std::size_t last, const ByteClass& set) noexcept;
std::size_t find_first_avx2(const std::uint8_t* data, std::size_t from,
                            std::size_t last, const ByteClass& set) noexcept;

}  // namespace scan

/// Runtime-dispatched find_first.
std::size_t find_first_in(std::string_view text, std::size_t from,
                          std::size_t last, const ByteClass& set) noexcept;

}  // namespace acmatch
