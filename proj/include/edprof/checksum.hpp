#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace edprof {

// Incremental 64-bit FNV-1a. Non-cryptographic: detects truncation and
// corruption, nothing more.
class Fnv1a64 {
 public:
  static constexpr std::uint64_t kOffsetBasis = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

  void update(std::span<const std::byte> bytes) noexcept;
  void update(std::string_view text) noexcept;
  std::uint64_t digest() const noexcept { return state_; }

 private:
  std::uint64_t state_ = kOffsetBasis;
};

std::uint64_t fnv1a64(std::string_view text) noexcept;

}  // namespace edprof
