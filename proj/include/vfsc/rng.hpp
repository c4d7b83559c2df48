#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace vfsc {

using Symbol = std::uint16_t;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of substream `index` under `master`. Stable across platforms.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Maps 64 random bits to [0, 1) using the top 53 bits.
constexpr double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Inverse-CDF lookup; `cdf` is non-decreasing with cdf.back() == 1.
Symbol sample_from_cdf(std::span<const double> cdf, double u);

/// Seeded random stream. The engine is mt19937_64, whose output sequence is
/// fixed by the standard; conversion to doubles is done here rather than by
/// <random> distributions so results are identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_bits() { return engine_(); }
  double uniform() { return unit_from_bits(engine_()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vfsc
