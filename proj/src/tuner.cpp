#include "fhsf/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fhsf/errors.hpp"
#include "fhsf/parallel.hpp"

namespace fhsf {

int GridAxis::count() const {
  if (!(step > 0.0)) throw error(errc::bad_argument, "grid step must be > 0");
  if (hi < lo) throw error(errc::bad_argument, "grid range is empty");
  // 1e-9 absorbs accumulated representation error in fractional steps.
  return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

GridAxis GridAxis::parse(const std::string& spec) {
  GridAxis axis;
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  try {
    if (c1 == std::string::npos) {  // single value
      axis.lo = axis.hi = std::stod(spec);
      axis.step = 1.0;
    } else if (c2 == std::string::npos) {
      throw std::invalid_argument(spec);
    } else {
      axis.lo = std::stod(spec.substr(0, c1));
      axis.hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
      axis.step = std::stod(spec.substr(c2 + 1));
    }
  } catch (const std::logic_error&) {
    throw error(errc::bad_argument, "grid axis must be lo:hi:step, got '" + spec + "'");
  }
  axis.count();  // validates
  return axis;
}

void ParamGrid::validate() const {
  if (size() == 0) throw error(errc::bad_argument, "parameter grid is empty");
  for (int i = 0; i < m.count(); ++i) {
    const double v = m.value(i);
    if (v != std::floor(v) || v < 1 || v > 8)
      throw error(errc::bad_argument, "m axis must contain integers in [1,8]");
  }
}

std::size_t ParamGrid::size() const {
  return std::size_t(m.count()) * st.count() * ht.count() * lt.count();
}

FhsfParams ParamGrid::config(std::size_t flat) const {
  const std::size_t nl = lt.count(), ns = st.count(), nh = ht.count();
  const int il = int(flat % nl);
  const int is = int((flat / nl) % ns);
  const int ih = int((flat / (nl * ns)) % nh);
  const int im = int(flat / (nl * ns * nh));
  FhsfParams p;
  p.m = int(m.value(im));
  p.thresholds = {ht.value(ih), st.value(is), lt.value(il)};
  return p;
}

std::vector<std::size_t> TuneResult::ranking(std::size_t image) const {
  const std::vector<double>& scores = pcd[image];
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  return order;
}

std::vector<std::size_t> TuneResult::global_ranking() const {
  std::vector<double> total(grid.size(), 0.0);
  for (const auto& row : pcd)
    for (std::size_t i = 0; i < row.size(); ++i) total[i] += row[i];
  std::vector<std::size_t> order(total.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&total](std::size_t a, std::size_t b) { return total[a] < total[b]; });
  return order;
}

TuneResult grid_search(const std::vector<RgbImage>& originals, const NoiseSpec& spec,
                       const ParamGrid& grid, const MetricContext& ctx) {
  if (originals.empty()) throw error(errc::bad_argument, "grid search needs >= 1 image");
  grid.validate();
  spec.validate();

  TuneResult result;
  result.grid = grid;
  result.pcd.assign(originals.size(), std::vector<double>(grid.size(), 0.0));

  MetricContext inner = ctx;
  inner.threads = 1;  // concurrency lives at the configuration level

  for (std::size_t img_i = 0; img_i < originals.size(); ++img_i) {
    const RgbImage& original = originals[img_i];
    const RgbImage noisy = inject(original, spec).first;
    const std::vector<LabPixel> reference = scielab_lab_field(original, ctx);

    std::vector<double>& row = result.pcd[img_i];
    parallel_chunks(grid.size(), ctx.threads, [&](int, std::size_t b, std::size_t e) {
      for (std::size_t flat = b; flat < e; ++flat) {
        const FhsfParams params = grid.config(flat);
        const RgbImage filtered = fhsf_filter(noisy, params, 1).first;
        row[flat] = mean_delta_e(reference, scielab_lab_field(filtered, inner));
      }
    });
  }
  return result;
}

std::vector<std::size_t> top_fraction_intersect(const TuneResult& result, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw error(errc::bad_argument, "fraction must be in (0,1]");
  if (result.pcd.empty()) throw error(errc::bad_argument, "tune result covers no images");

  const auto keep = static_cast<std::size_t>(std::ceil(fraction * double(result.grid.size())));
  std::vector<std::size_t> acc;
  for (std::size_t img = 0; img < result.pcd.size(); ++img) {
    std::vector<std::size_t> top = result.ranking(img);
    top.resize(std::min(keep, top.size()));
    std::sort(top.begin(), top.end());
    if (img == 0) {
      acc = std::move(top);
    } else {
      std::vector<std::size_t> merged;
      std::set_intersection(acc.begin(), acc.end(), top.begin(), top.end(),
                            std::back_inserter(merged));
      acc = std::move(merged);
    }
  }
  return acc;
}

std::map<int, std::vector<double>> min_pcd_per_m(const TuneResult& result) {
  std::map<int, std::vector<double>> minima;
  const std::size_t per_m = result.grid.size() / result.grid.m.count();
  for (int im = 0; im < result.grid.m.count(); ++im) {
    const int m_value = int(result.grid.m.value(im));
    std::vector<double> per_image;
    for (const auto& row : result.pcd) {
      double best = row[im * per_m];
      for (std::size_t k = 1; k < per_m; ++k)
        best = std::min(best, row[im * per_m + k]);
      per_image.push_back(best);
    }
    minima[m_value] = std::move(per_image);
  }
  return minima;
}

}  // namespace fhsf
