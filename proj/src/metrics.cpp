#include "fhsf/metrics.hpp"

#include <chrono>
#include <cmath>

#include "fhsf/errors.hpp"
#include "fhsf/parallel.hpp"

namespace fhsf {

namespace {

void check_same_size(const RgbImage& a, const RgbImage& b) {
  if (!a.same_size(b))
    throw error(errc::dimension_mismatch, "metric inputs differ in size");
}

struct Kernel1D {
  std::vector<double> taps;  // taps[radius + k], k in [-radius, radius]
  int radius = 0;
};

// Unit-sum discrete Gaussian. Taps below 1e-17 of the peak contribute nothing
// at double precision and are trimmed from the support.
Kernel1D gaussian_taps(double sigma_px, int max_radius) {
  std::vector<double> half{1.0};
  for (int k = 1; k <= max_radius; ++k) {
    const double v = std::exp(-0.5 * k * k / (sigma_px * sigma_px));
    if (v < 1e-17) break;
    half.push_back(v);
  }
  Kernel1D kern;
  kern.radius = static_cast<int>(half.size()) - 1;
  kern.taps.assign(2 * kern.radius + 1, 0.0);
  double sum = half[0];
  for (int k = 1; k <= kern.radius; ++k) sum += 2.0 * half[k];
  for (int k = 0; k <= kern.radius; ++k) {
    const double v = half[k] / sum;
    kern.taps[kern.radius + k] = v;
    kern.taps[kern.radius - k] = v;
  }
  return kern;
}

void conv_rows(const std::vector<double>& in, int w, int h, const Kernel1D& k,
               std::vector<double>& out, int threads) {
  const int r = k.radius;
  const double* taps = k.taps.data() + r;
  parallel_chunks(h, threads, [&](int, std::size_t y0, std::size_t y1) {
    for (std::size_t y = y0; y < y1; ++y) {
      const double* row = in.data() + y * w;
      double* orow = out.data() + y * w;
      for (int x = 0; x < w; ++x) {
        double s = 0.0;
        if (x >= r && x + r < w) {
          for (int t = -r; t <= r; ++t) s += taps[t] * row[x + t];
        } else {
          for (int t = -r; t <= r; ++t) s += taps[t] * row[std::clamp(x + t, 0, w - 1)];
        }
        orow[x] = s;
      }
    }
  });
}

void conv_cols(const std::vector<double>& in, int w, int h, const Kernel1D& k,
               std::vector<double>& out, int threads) {
  const int r = k.radius;
  const double* taps = k.taps.data() + r;
  parallel_chunks(h, threads, [&](int, std::size_t y0, std::size_t y1) {
    for (std::size_t y = y0; y < y1; ++y) {
      double* orow = out.data() + y * w;
      for (int x = 0; x < w; ++x) orow[x] = 0.0;
      for (int t = -r; t <= r; ++t) {
        const double* srow = in.data() + std::size_t(std::clamp(int(y) + t, 0, h - 1)) * w;
        const double tap = taps[t];
        for (int x = 0; x < w; ++x) orow[x] += tap * srow[x];
      }
    }
  });
}

// Weighted sum of separable Gaussian responses, normalized by the signed
// weight total so constants are preserved.
std::vector<double> mixture_filter(const std::vector<double>& plane, int w, int h,
                                   const std::vector<GaussComponent>& comps,
                                   double samples_per_degree, int threads) {
  double sigma_max = 0.0;
  double weight_sum = 0.0;
  for (const GaussComponent& c : comps) {
    sigma_max = std::max(sigma_max, c.spread_deg * samples_per_degree);
    weight_sum += c.weight;
  }
  const int max_radius = static_cast<int>(std::ceil(3.0 * sigma_max));

  std::vector<double> acc(plane.size(), 0.0);
  std::vector<double> tmp(plane.size());
  std::vector<double> res(plane.size());
  for (const GaussComponent& c : comps) {
    const Kernel1D k = gaussian_taps(c.spread_deg * samples_per_degree, max_radius);
    conv_rows(plane, w, h, k, tmp, threads);
    conv_cols(tmp, w, h, k, res, threads);
    const double cw = c.weight;
    parallel_chunks(h, threads, [&](int, std::size_t y0, std::size_t y1) {
      for (std::size_t i = y0 * w; i < y1 * std::size_t(w); ++i) acc[i] += cw * res[i];
    });
  }
  parallel_chunks(h, threads, [&](int, std::size_t y0, std::size_t y1) {
    for (std::size_t i = y0 * w; i < y1 * std::size_t(w); ++i) acc[i] /= weight_sum;
  });
  return acc;
}

}  // namespace

void SCielabConfig::validate() const {
  if (!(samples_per_degree > 0.0))
    throw error(errc::bad_argument, "samples_per_degree must be > 0");
  for (const auto& plane : planes) {
    if (plane.empty()) throw error(errc::bad_argument, "every plane needs >= 1 component");
    double wsum = 0.0;
    for (const GaussComponent& c : plane) {
      if (!(c.spread_deg > 0.0)) throw error(errc::bad_argument, "spreads must be > 0");
      wsum += c.weight;
    }
    if (std::abs(wsum) < 1e-9)
      throw error(errc::bad_argument, "plane weights must not sum to zero");
  }
}

double mae(const RgbImage& a, const RgbImage& b) {
  check_same_size(a, b);
  std::uint64_t sum = 0;
  const std::uint8_t* pa = a.data().data();
  const std::uint8_t* pb = b.data().data();
  const std::size_t n = a.data().size();
  for (std::size_t i = 0; i < n; ++i) sum += std::uint64_t(std::abs(int(pa[i]) - int(pb[i])));
  return double(sum) / double(n);
}

double mse(const RgbImage& a, const RgbImage& b) {
  check_same_size(a, b);
  std::uint64_t sum = 0;
  const std::uint8_t* pa = a.data().data();
  const std::uint8_t* pb = b.data().data();
  const std::size_t n = a.data().size();
  for (std::size_t i = 0; i < n; ++i) {
    const int d = int(pa[i]) - int(pb[i]);
    sum += std::uint64_t(d * d);
  }
  return double(sum) / double(n);
}

double ncd(const RgbImage& original, const RgbImage& filtered, const WhitePoint& white) {
  check_same_size(original, filtered);
  double num = 0.0, den = 0.0;
  for (int y = 0; y < original.height(); ++y) {
    for (int x = 0; x < original.width(); ++x) {
      const LabPixel lo = srgb_to_lab(original.pixel(x, y), white);
      const LabPixel lf = srgb_to_lab(filtered.pixel(x, y), white);
      num += delta_e(lo, lf);
      den += std::sqrt(lo.L * lo.L + lo.a * lo.a + lo.b * lo.b);
    }
  }
  if (den == 0.0)
    throw error(errc::degenerate_input, "NCD undefined for an all-black original");
  return num / den;
}

std::vector<LabPixel> scielab_lab_field(const RgbImage& img, const MetricContext& ctx) {
  ctx.scielab.validate();
  const int w = img.width(), h = img.height();
  const std::size_t n = img.pixel_count();

  std::array<std::vector<double>, 3> opp;
  for (auto& p : opp) p.resize(n);
  parallel_chunks(h, ctx.threads, [&](int, std::size_t y0, std::size_t y1) {
    for (std::size_t y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = y * w + x;
        double o[3];
        ctx.opponent.forward(srgb_to_xyz(img.pixel(x, int(y))), o);
        opp[0][i] = o[0];
        opp[1][i] = o[1];
        opp[2][i] = o[2];
      }
    }
  });

  for (int p = 0; p < 3; ++p)
    opp[p] = mixture_filter(opp[p], w, h, ctx.scielab.planes[p],
                            ctx.scielab.samples_per_degree, ctx.threads);

  std::vector<LabPixel> lab(n);
  parallel_chunks(h, ctx.threads, [&](int, std::size_t y0, std::size_t y1) {
    for (std::size_t i = y0 * w; i < y1 * std::size_t(w); ++i) {
      const double o[3] = {opp[0][i], opp[1][i], opp[2][i]};
      lab[i] = xyz_to_lab(ctx.opponent.inverse(o), ctx.white);
    }
  });
  return lab;
}

double mean_delta_e(const std::vector<LabPixel>& a, const std::vector<LabPixel>& b) {
  if (a.size() != b.size())
    throw error(errc::dimension_mismatch, "Lab fields differ in size");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += delta_e(a[i], b[i]);
  return sum / double(a.size());
}

std::vector<double> scielab_map(const RgbImage& a, const RgbImage& b, const MetricContext& ctx) {
  check_same_size(a, b);
  const std::vector<LabPixel> fa = scielab_lab_field(a, ctx);
  const std::vector<LabPixel> fb = scielab_lab_field(b, ctx);
  std::vector<double> field(fa.size());
  for (std::size_t i = 0; i < fa.size(); ++i) field[i] = delta_e(fa[i], fb[i]);
  return field;
}

double pcd(const RgbImage& a, const RgbImage& b, const MetricContext& ctx) {
  check_same_size(a, b);
  return mean_delta_e(scielab_lab_field(a, ctx), scielab_lab_field(b, ctx));
}

MetricReport metric_report(const RgbImage& original, const RgbImage& processed,
                           const MetricContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  MetricReport r;
  r.mae = mae(original, processed);
  r.mse = mse(original, processed);
  r.ncd = ncd(original, processed, ctx.white);
  r.pcd = pcd(original, processed, ctx);
  r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace fhsf
