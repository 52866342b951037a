#include "edprof/checksum.hpp"

namespace edprof {

void Fnv1a64::update(std::span<const std::byte> bytes) noexcept {
  std::uint64_t h = state_;
  for (const std::byte b : bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= kPrime;
  }
  state_ = h;
}

void Fnv1a64::update(std::string_view text) noexcept {
  update(std::as_bytes(std::span<const char>(text.data(), text.size())));
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
  Fnv1a64 h;
  h.update(text);
  return h.digest();
}

}  // namespace edprof
