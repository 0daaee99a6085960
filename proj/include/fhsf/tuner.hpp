#ifndef FHSF_TUNER_HPP
#define FHSF_TUNER_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "fhsf/filters.hpp"
#include "fhsf/metrics.hpp"
#include "fhsf/noise.hpp"

namespace fhsf {

// Inclusive range lo..hi with positive step.
struct GridAxis {
  double lo = 0.0, hi = 0.0, step = 1.0;

  int count() const;
  double value(int i) const { return lo + i * step; }
  static GridAxis parse(const std::string& spec);  // "lo:hi:step"
};

struct ParamGrid {
  GridAxis m{1, 8, 1};
  GridAxis ht{6, 20, 2};
  GridAxis st{4, 16, 2};
  GridAxis lt{32, 64, 4};

  void validate() const;
  std::size_t size() const;
  // Flat enumeration is lexicographic in (m, ht, st, lt), which is also the
  // rank tie-break order.
  FhsfParams config(std::size_t flat) const;
};

struct TuneResult {
  ParamGrid grid;
  std::vector<std::vector<double>> pcd;  // [image][flat config index]

  // Config indices by ascending PCD; ties resolve to the lower flat index.
  std::vector<std::size_t> ranking(std::size_t image) const;
  std::vector<std::size_t> global_ranking() const;  // by summed PCD
};

// For each image: inject one noise realization (fixed seed), filter with
// every grid configuration, record PCD against the clean original.
// Configurations are evaluated concurrently on ctx.threads workers; results
// are identical for any worker count.
TuneResult grid_search(const std::vector<RgbImage>& originals, const NoiseSpec& spec,
                       const ParamGrid& grid, const MetricContext& ctx = {});

// Intersection across images of the ceil(fraction*|grid|) lowest-PCD
// configurations. May be empty; that is a result, not an error.
std::vector<std::size_t> top_fraction_intersect(const TuneResult& result, double fraction);

// m -> per-image minimum PCD over all thresholds at that m.
std::map<int, std::vector<double>> min_pcd_per_m(const TuneResult& result);

}  // namespace fhsf

#endif
