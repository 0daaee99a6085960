#include "fhsf/colorspace.hpp"

#include <algorithm>
#include <cmath>

#include "fhsf/errors.hpp"

namespace fhsf {

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

// Rec.709 RGB (linear) -> XYZ, D65.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

const double* srgb_linear_lut() {
  static const auto lut = [] {
    static double t[256];
    for (int i = 0; i < 256; ++i) {
      const double c = i / 255.0;
      t[i] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    }
    return t;
  }();
  return lut;
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  constexpr double delta3 = delta * delta * delta;
  // Linear branch also covers slightly negative inputs from opponent filtering.
  return t > delta3 ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

}  // namespace

namespace {

// Reciprocal tables replace the two divisions in the hot RGB->HSL path.
struct HslTables {
  double sat[511];   // 100 / den for den = 255 - |2l - 255|
  double hue[256];   // 60 / chroma
  HslTables() {
    sat[0] = hue[0] = 0.0;
    for (int i = 1; i <= 510; ++i) sat[i] = 100.0 / i;
    for (int i = 1; i <= 255; ++i) hue[i] = 60.0 / i;
  }
};
const HslTables kHsl;

}  // namespace

HslPixel rgb_to_hsl(Rgb p) {
  const int r = p.r, g = p.g, b = p.b;
  int mx = r > g ? r : g;
  if (b > mx) mx = b;
  int mn = r < g ? r : g;
  if (b < mn) mn = b;
  const int c = mx - mn;
  HslPixel out;
  out.l = (mx + mn) * 0.5;
  if (c == 0) return out;  // achromatic: s=0, h=0 by convention
  // 255 - |2l - 255| simplifies to min(mx+mn, 510-mx-mn) on integers
  const int den = mx + mn <= 255 ? mx + mn : 510 - mx - mn;
  out.s = c * kHsl.sat[den];
  if (out.s > 100.0) out.s = 100.0;  // reciprocal rounding can overshoot by 1 ulp
  const double sector = kHsl.hue[c];
  double h;
  if (mx == r)
    h = (g - b) * sector;
  else if (mx == g)
    h = (b - r) * sector + 120.0;
  else
    h = (r - g) * sector + 240.0;
  out.h = h < 0.0 ? h + 360.0 : h;
  return out;
}

Rgb hsl_to_rgb(const HslPixel& p) {
  const double c = p.s / 100.0 * (255.0 - std::abs(2.0 * p.l - 255.0));
  const double hp = p.h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0.0, g = 0.0, b = 0.0;
  if (hp < 1.0) {
    r = c, g = x;
  } else if (hp < 2.0) {
    r = x, g = c;
  } else if (hp < 3.0) {
    g = c, b = x;
  } else if (hp < 4.0) {
    g = x, b = c;
  } else if (hp < 5.0) {
    r = x, b = c;
  } else {
    r = c, b = x;
  }
  const double m = p.l - c / 2.0;
  auto to_byte = [](double v) {
    return static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
  };
  return Rgb{to_byte(r + m), to_byte(g + m), to_byte(b + m)};
}

double hsl_distance(const HslPixel& a, const HslPixel& b) {
  const double dl = a.l - b.l;
  const double q = a.s * a.s + b.s * b.s -
                   2.0 * a.s * b.s * std::cos((a.h - b.h) * kDegToRad) + dl * dl;
  return std::sqrt(std::max(q, 0.0));
}

int similarity_cost(const HslPixel& a, const HslPixel& b, const SimilarityThresholds& t) {
  if (circular_hue_diff(a.h, b.h) > t.ht) return 1;
  if (std::abs(a.s - b.s) > t.st) return 2;
  return 3;
}

Xyz srgb_to_xyz(Rgb p) {
  const double* lut = srgb_linear_lut();
  const double r = lut[p.r], g = lut[p.g], b = lut[p.b];
  return Xyz{
      kRgbToXyz[0][0] * r + kRgbToXyz[0][1] * g + kRgbToXyz[0][2] * b,
      kRgbToXyz[1][0] * r + kRgbToXyz[1][1] * g + kRgbToXyz[1][2] * b,
      kRgbToXyz[2][0] * r + kRgbToXyz[2][1] * g + kRgbToXyz[2][2] * b,
  };
}

LabPixel xyz_to_lab(const Xyz& v, const WhitePoint& white) {
  const double fx = lab_f(v.x / white.x);
  const double fy = lab_f(v.y / white.y);
  const double fz = lab_f(v.z / white.z);
  return LabPixel{116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LabPixel srgb_to_lab(Rgb p, const WhitePoint& white) {
  return xyz_to_lab(srgb_to_xyz(p), white);
}

double delta_e(const LabPixel& a, const LabPixel& b) {
  const double dL = a.L - b.L, da = a.a - b.a, db = a.b - b.b;
  return std::sqrt(dL * dL + da * da + db * db);
}

OpponentTransform OpponentTransform::defaults() {
  static constexpr double kOpp[3][3] = {
      {0.279, 0.72, -0.107},
      {-0.449, 0.29, -0.077},
      {0.086, -0.59, 0.501},
  };
  return from_matrix(kOpp);
}

OpponentTransform OpponentTransform::from_matrix(const double m[3][3]) {
  OpponentTransform t;
  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      t.fwd_[i][j] = m[i][j];
      scale = std::max(scale, std::abs(m[i][j]));
    }

  // Adjugate inverse with a relative singularity guard.
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (!(std::abs(det) > 1e-12 * scale * scale * scale))
    throw error(errc::bad_config, "opponent matrix is singular");

  t.inv_[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  t.inv_[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  t.inv_[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  t.inv_[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  t.inv_[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  t.inv_[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  t.inv_[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  t.inv_[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  t.inv_[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return t;
}

void OpponentTransform::forward(const Xyz& in, double out[3]) const {
  out[0] = fwd_[0][0] * in.x + fwd_[0][1] * in.y + fwd_[0][2] * in.z;
  out[1] = fwd_[1][0] * in.x + fwd_[1][1] * in.y + fwd_[1][2] * in.z;
  out[2] = fwd_[2][0] * in.x + fwd_[2][1] * in.y + fwd_[2][2] * in.z;
}

Xyz OpponentTransform::inverse(const double in[3]) const {
  return Xyz{
      inv_[0][0] * in[0] + inv_[0][1] * in[1] + inv_[0][2] * in[2],
      inv_[1][0] * in[0] + inv_[1][1] * in[1] + inv_[1][2] * in[2],
      inv_[2][0] * in[0] + inv_[2][1] * in[1] + inv_[2][2] * in[2],
  };
}

HslImage hsl_plane(const RgbImage& img) {
  HslImage out;
  out.width = img.width();
  out.height = img.height();
  out.px.resize(img.pixel_count());
  const std::uint8_t* d = img.data().data();
  for (std::size_t i = 0; i < out.px.size(); ++i)
    out.px[i] = rgb_to_hsl(Rgb{d[3 * i], d[3 * i + 1], d[3 * i + 2]});
  return out;
}

}  // namespace fhsf
