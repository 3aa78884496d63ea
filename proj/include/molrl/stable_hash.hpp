#pragma once

#include <cstdint>
#include <string_view>

namespace molrl {

/// Platform-independent 64-bit hash used for fingerprint bit positions.
///
///   state = kSeed
///   for each input byte b:   state = state * kMultiplier + (b + 1)   (mod 2^64)
///   digest = splitmix64_finalize(state)
///
/// Integers are fed as 8 little-endian bytes. The finalizer is the standard
/// splitmix64 output mix, so the low bits used for folding depend on every
/// input byte.
class StableHasher {
 public:
  static constexpr std::uint64_t kSeed = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kMultiplier = 0x100000001B3ULL;

  StableHasher& bytes(std::string_view data) {
    for (unsigned char c : data) {
      state_ = state_ * kMultiplier + (static_cast<std::uint64_t>(c) + 1U);
    }
    return *this;
  }

  StableHasher& u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      const auto c = static_cast<std::uint64_t>((v >> (8 * i)) & 0xFFU);
      state_ = state_ * kMultiplier + (c + 1U);
    }
    return *this;
  }

  StableHasher& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }

  std::uint64_t digest() const { return finalize(state_); }

  static constexpr std::uint64_t finalize(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_ = kSeed;
};

inline std::uint64_t stable_hash(std::string_view data) {
  return StableHasher{}.bytes(data).digest();
}

}  // namespace molrl
