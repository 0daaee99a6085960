#include "fhsf/noise.hpp"

#include <cmath>
#include <numeric>

#include "fhsf/errors.hpp"

namespace fhsf {

void NoiseSpec::validate() const {
  if (!(p >= 0.0 && p <= 1.0))
    throw error(errc::bad_argument, "noise probability must be in [0,1]");
  double sum = 0.0;
  for (double w : channel_mix) {
    if (w < 0.0) throw error(errc::bad_argument, "channel mix weights must be >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw error(errc::bad_argument, "channel mix must sum to 1");
  if (impulse_values.empty())
    throw error(errc::bad_argument, "impulse value set must be non-empty");
}

std::size_t CorruptionMask::count() const {
  std::size_t n = 0;
  for (std::uint8_t v : hit) n += v;
  return n;
}

std::pair<RgbImage, CorruptionMask> inject(const RgbImage& img, const NoiseSpec& spec) {
  spec.validate();
  RgbImage out = img;
  CorruptionMask mask{img.width(), img.height(),
                      std::vector<std::uint8_t>(img.pixel_count(), 0)};

  const double c1 = spec.channel_mix[0];
  const double c2 = c1 + spec.channel_mix[1];
  const double c3 = c2 + spec.channel_mix[2];
  const auto k = static_cast<std::uint32_t>(spec.impulse_values.size());

  std::uint8_t* data = out.data().data();
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    PixelRng rng(spec.seed, i);
    if (rng.uniform01() >= spec.p) continue;

    bool corrupt[3] = {false, false, false};
    const double u = rng.uniform01();
    if (u < c1)
      corrupt[0] = true;
    else if (u < c2)
      corrupt[1] = true;
    else if (u < c3)
      corrupt[2] = true;
    else
      corrupt[0] = corrupt[1] = corrupt[2] = true;

    std::uint8_t* px = data + 3 * i;
    for (int c = 0; c < 3; ++c)
      if (corrupt[c]) px[c] = spec.impulse_values[rng.below(k)];
    mask.hit[i] = 1;  // the trial fired, even if a drawn value matched the original
  }
  return {std::move(out), std::move(mask)};
}

}  // namespace fhsf
