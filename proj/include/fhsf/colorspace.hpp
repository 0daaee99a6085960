#ifndef FHSF_COLORSPACE_HPP
#define FHSF_COLORSPACE_HPP

#include <cmath>
#include <vector>

#include "fhsf/image.hpp"

namespace fhsf {

// Cylindrical HSL coordinates of one pixel: hue in degrees [0,360),
// saturation in [0,100], lightness in [0,255]. Achromatic pixels carry h=0.
struct HslPixel {
  double h = 0.0, s = 0.0, l = 0.0;
};

struct LabPixel {
  double L = 0.0, a = 0.0, b = 0.0;
};

struct Xyz {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Component-wise closeness thresholds for the HSL similarity test.
struct SimilarityThresholds {
  double ht = 0.0, st = 0.0, lt = 0.0;

  bool valid() const noexcept { return ht >= 0.0 && st >= 0.0 && lt >= 0.0; }
};

struct WhitePoint {
  double x = 0.95047, y = 1.0, z = 1.08883;  // D65
};

// Double-hexcone HSL transform and its inverse (inverse rounds to bytes).
HslPixel rgb_to_hsl(Rgb p);
Rgb hsl_to_rgb(const HslPixel& p);

// Shorter arc between two hue angles, in degrees. The fold form compiles
// branch-free, which matters in the filter hot path.
inline double circular_hue_diff(double h1, double h2) {
  return 180.0 - std::fabs(std::fabs(h1 - h2) - 180.0);
}

// Cylindrical distance sqrt(si^2 + sj^2 - 2 si sj cos(hi-hj) + (li-lj)^2).
double hsl_distance(const HslPixel& a, const HslPixel& b);

// True iff hue, saturation and lightness are all within their thresholds.
// Evaluates hue first and short-circuits, so a hue mismatch costs a single
// comparison.
inline bool similar(const HslPixel& a, const HslPixel& b, const SimilarityThresholds& t) {
  if (circular_hue_diff(a.h, b.h) > t.ht) return false;
  if (std::fabs(a.s - b.s) > t.st) return false;
  return std::fabs(a.l - b.l) <= t.lt;
}

// Number of threshold comparisons the short-circuit test performs (1..3).
int similarity_cost(const HslPixel& a, const HslPixel& b, const SimilarityThresholds& t);

// sRGB decoding (IEC 61966-2-1 piecewise gamma), Rec.709 primaries, D65.
Xyz srgb_to_xyz(Rgb p);
LabPixel xyz_to_lab(const Xyz& v, const WhitePoint& white = {});
LabPixel srgb_to_lab(Rgb p, const WhitePoint& white = {});

double delta_e(const LabPixel& a, const LabPixel& b);

// Linear opponent-color decomposition of XYZ with a guaranteed inverse.
class OpponentTransform {
 public:
  // Luminance / red-green / blue-yellow rows of the S-CIELAB convention.
  static OpponentTransform defaults();
  // Throws bad_config if the matrix is (near-)singular.
  static OpponentTransform from_matrix(const double m[3][3]);

  void forward(const Xyz& in, double out[3]) const;
  Xyz inverse(const double in[3]) const;

  const double* forward_row(int i) const { return fwd_[i]; }

 private:
  OpponentTransform() = default;
  double fwd_[3][3] = {};
  double inv_[3][3] = {};
};

// Per-pixel HSL plane, computed once per image rather than per window.
struct HslImage {
  int width = 0, height = 0;
  std::vector<HslPixel> px;

  const HslPixel& at(int x, int y) const {
    return px[static_cast<std::size_t>(y) * width + x];
  }
};

HslImage hsl_plane(const RgbImage& img);

}  // namespace fhsf

#endif
