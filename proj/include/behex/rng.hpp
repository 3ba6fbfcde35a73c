#pragma once

#include <cstdint>
#include <string_view>

namespace behex {

// Deterministic xoshiro256** stream with splitmix64 seeding. All randomness
// in the library flows through this type so that artifacts depend only on
// the configured seed, never on library-version or platform quirks of the
// <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive integer range via rejection-free Lemire reduction.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  // Derive an independent stream for a tagged sub-purpose.
  Rng fork(std::uint64_t tag) const {
    std::uint64_t x = state_[0] ^ (tag * 0x9e3779b97f4a7c15ull);
    x ^= state_[3] + 0x6a09e667f3bcc909ull;
    return Rng(x);
  }

  Rng fork(std::string_view tag) const { return fork(hash_tag(tag)); }

  static std::uint64_t hash_tag(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    return h;
  }

  // Stable mix of a seed with a list of indices (sweep / per-entity seeding).
  static std::uint64_t mix(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t x = seed;
    for (std::uint64_t p : parts) {
      x ^= p + 0x9e3779b97f4a7c15ull + (x << 6) + (x >> 2);
      x = splitmix64(x);
    }
    return x;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace behex
