#pragma once

// Seeded randomness with output that is identical across standard libraries.
// std::mt19937_64 is fully specified, but the std:: distributions are not, so
// the mappings from engine output to values live here.

#include <cstddef>
#include <cstdint>
#include <random>

namespace edprof::rng {

// SplitMix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t mix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL));
}

class Engine {
 public:
  explicit Engine(std::uint64_t seed) : gen_(mix(seed)) {}

  std::uint64_t bits() { return gen_(); }
  // Uniform integer in [0, n), by rejection (no modulo bias).
  std::uint64_t index(std::uint64_t n);
  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  // Uniform double in (0, 1).
  double open_uniform();
  double normal();  // standard normal (Box-Muller, one value cached)
  double gamma(double shape);  // Marsaglia-Tsang, scale 1
  double beta(double a, double b);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace edprof::rng
