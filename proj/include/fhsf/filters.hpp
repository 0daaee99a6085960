#ifndef FHSF_FILTERS_HPP
#define FHSF_FILTERS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>

#include "fhsf/colorspace.hpp"
#include "fhsf/image.hpp"

namespace fhsf {

enum class FilterKind { vmf, bvdf, ddf, fpgf1, fpgf2, fhsf_s, fhsf_hsl };

FilterKind filter_kind_from_name(const std::string& name);  // throws bad_argument
std::string filter_kind_name(FilterKind kind);

struct FilterStats {
  // Switching filters: pixels classified noisy and replaced by the VMF
  // fallback. Uniform filters: pixels whose output value differs from input.
  std::size_t pixels_switched = 0;
  // Pairwise comparisons: one per similarity/distance peer test, plus
  // n(n-1)/2 = 36 per window that goes through an order-statistics filter.
  std::size_t distance_evals = 0;
  double elapsed = 0.0;  // seconds, includes colorspace precompute
};

struct FhsfParams {
  int m = 3;
  SimilarityThresholds thresholds{10.0, 10.0, 48.0};
};

struct FhsfHslParams {
  int m = 3;
  double tol = 55.0;
};

struct FpgfParams {
  int m = 3;
  double tol = 50.0;
  int norm = 2;  // 1 or 2; also selects the VMF fallback norm
};

// monostate = use the kind's defaults.
using FilterParams = std::variant<std::monostate, FhsfParams, FhsfHslParams, FpgfParams>;

// Order-statistics window operations. Ties broken by lowest window index.
Rgb vmf_window(const Window& w, int norm);
Rgb bvdf_window(const Window& w);
Rgb ddf_window(const Window& w);

using HslWindow = std::array<HslPixel, Window::kSize>;

struct PeerScan {
  bool is_clean = false;
  int checks = 0;
};

// Scans the 8 non-center entries in window order, stopping as soon as m peers
// are found, the full neighbor set can no longer reach m, or the scan budget
// max(m, n-m) is spent. For m <= 4 this pins checks into [m, n-m]; larger m
// drifts towards classifying everything noisy, the documented approach-the-VMF
// behavior of high peer-group sizes.
//
// Bit k of `eligible` marks the k-th non-center entry as usable as a peer.
// The filters clear bits for border entries that replicate the center's own
// coordinate, so a pixel never vouches for itself; ineligible entries still
// consume a check.
PeerScan peer_count_hsl(const HslWindow& w, const SimilarityThresholds& t, int m,
                        unsigned eligible = 0xFF);

std::pair<RgbImage, FilterStats> fhsf_filter(const RgbImage& img, const FhsfParams& params,
                                             int threads = 1);
std::pair<RgbImage, FilterStats> fhsf_hsl_filter(const RgbImage& img, int m, double tol,
                                                 int threads = 1);
std::pair<RgbImage, FilterStats> fpgf_filter(const RgbImage& img, const FpgfParams& params,
                                             int threads = 1);

// Uniform driver; the non-switching kinds apply their window operation at
// every pixel. Output is independent of the worker count.
std::pair<RgbImage, FilterStats> filter_image(const RgbImage& img, FilterKind kind,
                                              const FilterParams& params = {},
                                              int threads = 1);

}  // namespace fhsf

#endif
