#ifndef FHSF_NOISE_HPP
#define FHSF_NOISE_HPP

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "fhsf/image.hpp"

namespace fhsf {

// Correlated impulsive noise: each pixel is hit with probability p; a hit
// corrupts R only, G only, B only, or all three channels according to
// channel_mix, replacing each selected channel with a random impulse value.
struct NoiseSpec {
  double p = 0.05;
  std::array<double, 4> channel_mix = {0.25, 0.25, 0.25, 0.25};
  std::vector<std::uint8_t> impulse_values = {0, 255};
  std::uint64_t seed = 1;

  void validate() const;  // throws bad_argument
};

struct CorruptionMask {
  int width = 0, height = 0;
  std::vector<std::uint8_t> hit;  // 1 where the injector altered the pixel

  bool at(int x, int y) const { return hit[static_cast<std::size_t>(y) * width + x] != 0; }
  std::size_t count() const;
};

// Deterministic regardless of evaluation order: every random draw comes from
// a counter-based generator keyed on (seed, pixel index).
std::pair<RgbImage, CorruptionMask> inject(const RgbImage& img, const NoiseSpec& spec);

// splitmix64 finalizer; also used by the test-image generators.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Keyed counter stream: pixel `index` owns the counter block
// [16*index, 16*index + 15], so streams never overlap and any pixel's draws
// can be produced without touching the others.
class PixelRng {
 public:
  PixelRng(std::uint64_t seed, std::uint64_t index)
      : state_(seed + kGamma * (16 * index)) {}

  std::uint64_t next() { return mix64(state_ += kGamma); }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(next() % n); }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  std::uint64_t state_;
};

}  // namespace fhsf

#endif
