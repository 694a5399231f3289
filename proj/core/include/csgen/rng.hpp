#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace csgen {

/// FNV-1a 64-bit hash. Used for candidate keys and per-instance seed mixing.
constexpr std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Deterministic random source. Wraps std::mt19937_64 (whose output stream is
/// specified by the standard) and derives doubles and bounded integers itself,
/// so sequences are bit-identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1), 53 bits of precision.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX / n * n;
    std::uint64_t u = next_u64();
    while (u >= limit) u = next_u64();
    return u % n;
  }

 private:
  std::mt19937_64 gen_;
};

/// Seed for one instance's search: the run seed mixed with the instance id.
/// Depends only on the id, so subsetting or reordering a dataset never
/// changes an instance's trajectory.
inline std::uint64_t instance_seed(std::uint64_t run_seed, std::string_view instance_id) {
  return run_seed ^ fnv1a64(instance_id);
}

}  // namespace csgen
