#ifndef FHSF_METRICS_HPP
#define FHSF_METRICS_HPP

#include <array>
#include <vector>

#include "fhsf/colorspace.hpp"
#include "fhsf/image.hpp"

namespace fhsf {

struct GaussComponent {
  double weight = 0.0;
  double spread_deg = 0.0;  // Gaussian standard deviation in degrees of visual angle
};

// Spatial pre-filter of the perceptual color difference: one Gaussian mixture
// per opponent plane. Composite kernels are normalized to unit (signed) sum
// after discretization, so constant images pass through unchanged.
struct SCielabConfig {
  double samples_per_degree = 23.0;
  std::array<std::vector<GaussComponent>, 3> planes{{
      {{0.921, 0.0283}, {0.105, 0.133}, {-0.108, 4.336}},
      {{0.531, 0.0392}, {0.330, 0.494}},
      {{0.488, 0.0536}, {0.371, 0.386}},
  }};

  void validate() const;  // throws bad_argument
};

struct MetricContext {
  WhitePoint white{};
  OpponentTransform opponent = OpponentTransform::defaults();
  SCielabConfig scielab{};
  int threads = 1;
};

struct MetricReport {
  double mae = 0.0;
  double mse = 0.0;
  double ncd = 0.0;
  double pcd = 0.0;
  double elapsed = 0.0;
};

// Mean absolute / squared channel error. Exact (integer accumulation).
double mae(const RgbImage& a, const RgbImage& b);
double mse(const RgbImage& a, const RgbImage& b);

// Summed CIELAB delta-E normalized by the summed Lab magnitude of the FIRST
// argument; not symmetric. Throws degenerate_input for an all-black original.
double ncd(const RgbImage& original, const RgbImage& filtered, const WhitePoint& white = {});

// Spatially filtered CIELAB field of one image: XYZ -> opponent planes ->
// per-plane Gaussian mixture (edge-replicated) -> XYZ -> Lab.
std::vector<LabPixel> scielab_lab_field(const RgbImage& img, const MetricContext& ctx = {});

double mean_delta_e(const std::vector<LabPixel>& a, const std::vector<LabPixel>& b);

// Per-pixel delta-E between the filtered fields of the two images.
std::vector<double> scielab_map(const RgbImage& a, const RgbImage& b,
                                const MetricContext& ctx = {});

// Mean of scielab_map.
double pcd(const RgbImage& a, const RgbImage& b, const MetricContext& ctx = {});

MetricReport metric_report(const RgbImage& original, const RgbImage& processed,
                           const MetricContext& ctx = {});

}  // namespace fhsf

#endif
