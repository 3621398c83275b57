#pragma once

#include <cstdint>
#include <random>

namespace gaugemc {

// splitmix64 step (Vigna, public domain). Used only to derive seeds, never
// as the simulation stream.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed for one (a, b) substream of a master seed. Injective in (a, b) for a
// fixed master, so disorder samples and Markov chains never share a stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b) {
  std::uint64_t s = master;
  splitmix64_next(s);
  s ^= a;
  splitmix64_next(s);
  s ^= b;
  return splitmix64_next(s);
}

// mt19937_64 is fully specified by the standard, and the uniform mapping
// below is fixed arithmetic, so streams are bit-identical across platforms.
// std::uniform_real_distribution is implementation-defined and must not be
// used anywhere results feed into persisted output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  int bit() { return static_cast<int>(eng_() >> 63); }

 private:
  std::mt19937_64 eng_;
};

inline constexpr const char* kRngName = "std::mt19937_64";
inline constexpr const char* kSeedMixerName = "splitmix64";

}  // namespace gaugemc
