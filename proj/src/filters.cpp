#include "fhsf/filters.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <cmath>
#include <limits>

#include "fhsf/errors.hpp"
#include "fhsf/parallel.hpp"

namespace fhsf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  const double s = std::chrono::duration<double>(Clock::now() - t0).count();
  return std::max(s, 1e-9);
}

constexpr int kPairEvals = Window::kSize * (Window::kSize - 1) / 2;  // 36

inline int l1_dist_i(Rgb a, Rgb b) {
  return std::abs(int(a.r) - int(b.r)) + std::abs(int(a.g) - int(b.g)) +
         std::abs(int(a.b) - int(b.b));
}

inline int l2_sq_i(Rgb a, Rgb b) {
  const int dr = int(a.r) - int(b.r), dg = int(a.g) - int(b.g), db = int(a.b) - int(b.b);
  return dr * dr + dg * dg + db * db;
}

inline double lp_dist(Rgb a, Rgb b, int norm) {
  return norm == 1 ? double(l1_dist_i(a, b)) : std::sqrt(double(l2_sq_i(a, b)));
}

// Angle between RGB vectors; involving a zero vector it is defined as 0.
inline double rgb_angle(Rgb a, Rgb b, double norm_a, double norm_b) {
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  const double dot = double(a.r) * b.r + double(a.g) * b.g + double(a.b) * b.b;
  return std::acos(std::clamp(dot / (norm_a * norm_b), -1.0, 1.0));
}

// Argmin over window entries of a per-entry aggregate; strict < keeps the
// lowest index on ties.
template <typename AggregateAt>
Rgb select_min(const Window& w, AggregateAt&& aggregate) {
  int best = 0;
  double best_val = aggregate(0);
  for (int i = 1; i < Window::kSize; ++i) {
    const double v = aggregate(i);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  return w.px[best];
}

template <typename DistFn>
void fill_pairwise(const Window& w, DistFn&& dist, double d[Window::kSize][Window::kSize]) {
  for (int i = 0; i < Window::kSize; ++i) d[i][i] = 0.0;
  for (int i = 0; i < Window::kSize; ++i)
    for (int j = i + 1; j < Window::kSize; ++j) d[i][j] = d[j][i] = dist(w.px[i], w.px[j]);
}

double row_sum(const double d[Window::kSize][Window::kSize], int i) {
  double s = 0.0;
  for (int j = 0; j < Window::kSize; ++j) s += d[i][j];
  return s;
}

}  // namespace

Rgb vmf_window(const Window& w, int norm) {
  if (norm != 1 && norm != 2) throw error(errc::bad_argument, "VMF norm must be 1 or 2");
  double d[Window::kSize][Window::kSize];
  fill_pairwise(w, [norm](Rgb a, Rgb b) { return lp_dist(a, b, norm); }, d);
  return select_min(w, [&d](int i) { return row_sum(d, i); });
}

Rgb bvdf_window(const Window& w) {
  double norms[Window::kSize];
  for (int i = 0; i < Window::kSize; ++i)
    norms[i] = std::sqrt(double(l2_sq_i(w.px[i], Rgb{0, 0, 0})));
  double a[Window::kSize][Window::kSize];
  for (int i = 0; i < Window::kSize; ++i) a[i][i] = 0.0;
  for (int i = 0; i < Window::kSize; ++i)
    for (int j = i + 1; j < Window::kSize; ++j)
      a[i][j] = a[j][i] = rgb_angle(w.px[i], w.px[j], norms[i], norms[j]);
  return select_min(w, [&a](int i) { return row_sum(a, i); });
}

Rgb ddf_window(const Window& w) {
  double norms[Window::kSize];
  for (int i = 0; i < Window::kSize; ++i)
    norms[i] = std::sqrt(double(l2_sq_i(w.px[i], Rgb{0, 0, 0})));
  double a[Window::kSize][Window::kSize];
  double d[Window::kSize][Window::kSize];
  for (int i = 0; i < Window::kSize; ++i) a[i][i] = d[i][i] = 0.0;
  for (int i = 0; i < Window::kSize; ++i)
    for (int j = i + 1; j < Window::kSize; ++j) {
      a[i][j] = a[j][i] = rgb_angle(w.px[i], w.px[j], norms[i], norms[j]);
      d[i][j] = d[j][i] = std::sqrt(double(l2_sq_i(w.px[i], w.px[j])));
    }
  // (sum of angles)^0.5 * (sum of distances)^0.5
  return select_min(w, [&](int i) { return std::sqrt(row_sum(a, i)) * std::sqrt(row_sum(d, i)); });
}

namespace {

// Non-center window entries in raster order, as (dx, dy) offsets.
constexpr int kNeighborDx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kNeighborDy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
constexpr int kNeighborWindowIndex[8] = {0, 1, 2, 3, 5, 6, 7, 8};

// Compile-time m: the loop unrolls and neighbor offsets become immediates.
template <int M, typename SimAt>
PeerScan scan_peers_fixed(SimAt&& sim) {
  constexpr int cap = Window::kSize - M;
  int peers = 0;
#pragma GCC unroll 8
  for (int k = 0; k < cap; ++k)
    if (sim(k) && ++peers >= M) return {true, k + 1};
  return {false, cap};
}

// SimAt: bool(int k) — is the k-th non-center entry a peer of the center.
template <typename SimAt>
PeerScan scan_peers(int m, SimAt&& sim) {
  const int cap = Window::kSize - m;
  if (m <= cap) {
    // The can't-reach-m exit coincides with the budget exit here, so a
    // single bound suffices: noisy classifications use exactly n-m checks.
    int peers = 0;
    for (int k = 0; k < cap; ++k)
      if (sim(k) && ++peers >= m) return {true, k + 1};
    return {false, cap};
  }
  // m > n-m: scan budget m, with the unreachable-count exit still live.
  PeerScan r;
  int peers = 0;
  for (int k = 0; k < 8; ++k) {
    ++r.checks;
    if (sim(k) && ++peers >= m) {
      r.is_clean = true;
      return r;
    }
    if (peers + (7 - k) < m) return r;
    if (r.checks == m) return r;
  }
  return r;
}

void check_group_size(int m) {
  if (m < 1 || m > Window::kSize - 1)
    throw error(errc::bad_argument, "peer group size must be in [1,8]");
}

struct WorkerTally {
  std::size_t switched = 0;
  std::size_t evals = 0;
};

// PeerAt: bool(size_t center_index, size_t neighbor_index) over flat pixel
// indices; neighbors are guaranteed distinct from the center.
// Scanner: PeerScan(sim) running the peer scan for the chosen m.
template <typename PeerAt, typename Scanner>
std::pair<RgbImage, FilterStats> run_switching_body(const RgbImage& img, int vmf_norm,
                                                    int threads, Clock::time_point t0,
                                                    PeerAt& peer, Scanner scan_with) {
  const int w = img.width(), h = img.height();
  RgbImage out = img;
  std::vector<WorkerTally> tally(std::max(1, threads));

  const std::ptrdiff_t offs[8] = {-w - 1, -w, -w + 1, -1, 1, w - 1, w, w + 1};

  parallel_chunks(h, threads, [&](int worker, std::size_t y0, std::size_t y1) {
    WorkerTally& t = tally[worker];
    auto handle = [&](int x, int y, const PeerScan& scan) {
      t.evals += scan.checks;
      if (!scan.is_clean) {
        out.set_pixel(x, y, vmf_window(window_at(img, x, y), vmf_norm));
        t.evals += kPairEvals;
        ++t.switched;
      }
    };
    // Clamped scan; entries replicating the center's coordinate are no peers.
    auto scan_border = [&](int x, int y) {
      return scan_with([&](int k) {
        const int nx = std::clamp(x + kNeighborDx[k], 0, w - 1);
        const int ny = std::clamp(y + kNeighborDy[k], 0, h - 1);
        if (nx == x && ny == y) return false;
        return peer(img.index(x, y), img.index(nx, ny));
      });
    };

    for (int y = int(y0); y < int(y1); ++y) {
      if (y == 0 || y == h - 1 || w < 3) {
        for (int x = 0; x < w; ++x) handle(x, y, scan_border(x, y));
        continue;
      }
      handle(0, y, scan_border(0, y));
      const std::size_t row = img.index(0, y);
      for (int x = 1; x < w - 1; ++x) {
        const std::size_t i = row + x;
        handle(x, y, scan_with([&](int k) { return peer(i, i + offs[k]); }));
      }
      handle(w - 1, y, scan_border(w - 1, y));
    }
  });

  FilterStats stats;
  for (const WorkerTally& t : tally) {
    stats.pixels_switched += t.switched;
    stats.distance_evals += t.evals;
  }
  stats.elapsed = seconds_since(t0);
  return {std::move(out), stats};
}

template <typename PeerAt>
std::pair<RgbImage, FilterStats> run_switching(const RgbImage& img, int m, int vmf_norm,
                                               int threads, Clock::time_point t0,
                                               PeerAt&& peer) {
  switch (m) {
    case 1:
      return run_switching_body(img, vmf_norm, threads, t0, peer,
                                [](auto&& sim) { return scan_peers_fixed<1>(sim); });
    case 2:
      return run_switching_body(img, vmf_norm, threads, t0, peer,
                                [](auto&& sim) { return scan_peers_fixed<2>(sim); });
    case 3:
      return run_switching_body(img, vmf_norm, threads, t0, peer,
                                [](auto&& sim) { return scan_peers_fixed<3>(sim); });
    case 4:
      return run_switching_body(img, vmf_norm, threads, t0, peer,
                                [](auto&& sim) { return scan_peers_fixed<4>(sim); });
    default:
      return run_switching_body(img, vmf_norm, threads, t0, peer,
                                [m](auto&& sim) { return scan_peers(m, sim); });
  }
}

template <typename WindowOp>
std::pair<RgbImage, FilterStats> run_uniform(const RgbImage& img, int threads, WindowOp&& op) {
  const auto t0 = Clock::now();
  const int w = img.width(), h = img.height();
  RgbImage out = img;
  std::vector<WorkerTally> tally(std::max(1, threads));

  parallel_chunks(h, threads, [&](int worker, std::size_t y0, std::size_t y1) {
    WorkerTally& t = tally[worker];
    for (int y = int(y0); y < int(y1); ++y) {
      for (int x = 0; x < w; ++x) {
        const Window win = window_at(img, x, y);
        const Rgb v = op(win);
        t.evals += kPairEvals;
        if (!(v == win.center())) ++t.switched;
        out.set_pixel(x, y, v);
      }
    }
  });

  FilterStats stats;
  for (const WorkerTally& t : tally) {
    stats.pixels_switched += t.switched;
    stats.distance_evals += t.evals;
  }
  stats.elapsed = seconds_since(t0);
  return {std::move(out), stats};
}

}  // namespace

PeerScan peer_count_hsl(const HslWindow& w, const SimilarityThresholds& t, int m,
                        unsigned eligible) {
  check_group_size(m);
  return scan_peers(m, [&](int k) {
    return ((eligible >> k) & 1u) != 0 &&
           similar(w[Window::kCenter], w[kNeighborWindowIndex[k]], t);
  });
}

std::pair<RgbImage, FilterStats> fhsf_filter(const RgbImage& img, const FhsfParams& params,
                                             int threads) {
  check_group_size(params.m);
  if (!params.thresholds.valid())
    throw error(errc::bad_argument, "similarity thresholds must be >= 0");
  const auto t0 = Clock::now();

  // Planar HSL layout keeps the hue pass, which settles most comparisons,
  // on a third of the memory. Uninitialized buffer: every slot is written
  // below. Counted towards elapsed.
  const std::size_t n = img.pixel_count();
  const std::unique_ptr<double[]> planes(new double[3 * n]);
  double* const hh = planes.get();
  double* const ss = hh + n;
  double* const ll = ss + n;
  {
    const std::uint8_t* d = img.data().data();
    parallel_chunks(n, threads, [&](int, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const HslPixel p = rgb_to_hsl(Rgb{d[3 * i], d[3 * i + 1], d[3 * i + 2]});
        hh[i] = p.h;
        ss[i] = p.s;
        ll[i] = p.l;
      }
    });
  }

  const SimilarityThresholds t = params.thresholds;
  return run_switching(img, params.m, 2, threads, t0,
                       [hh, ss, ll, t](std::size_t ci, std::size_t ni) {
                         return similar(HslPixel{hh[ci], ss[ci], ll[ci]},
                                        HslPixel{hh[ni], ss[ni], ll[ni]}, t);
                       });
}

std::pair<RgbImage, FilterStats> fhsf_hsl_filter(const RgbImage& img, int m, double tol,
                                                 int threads) {
  check_group_size(m);
  if (tol < 0.0) throw error(errc::bad_argument, "distance tolerance must be >= 0");
  const auto t0 = Clock::now();
  const HslImage plane = hsl_plane(img);
  const HslPixel* px = plane.px.data();
  return run_switching(img, m, 2, threads, t0, [px, tol](std::size_t ci, std::size_t ni) {
    return hsl_distance(px[ci], px[ni]) <= tol;
  });
}

std::pair<RgbImage, FilterStats> fpgf_filter(const RgbImage& img, const FpgfParams& params,
                                             int threads) {
  check_group_size(params.m);
  if (params.tol < 0.0) throw error(errc::bad_argument, "distance tolerance must be >= 0");
  if (params.norm != 1 && params.norm != 2)
    throw error(errc::bad_argument, "FPGF norm must be 1 or 2");
  const auto t0 = Clock::now();
  const std::uint8_t* d = img.data().data();
  auto px_at = [d](std::size_t i) { return Rgb{d[3 * i], d[3 * i + 1], d[3 * i + 2]}; };
  if (params.norm == 1) {
    const double tol = params.tol;
    return run_switching(img, params.m, 1, threads, t0, [px_at, tol](std::size_t ci, std::size_t ni) {
      return double(l1_dist_i(px_at(ci), px_at(ni))) <= tol;
    });
  }
  const double tol_sq = params.tol * params.tol;
  return run_switching(img, params.m, 2, threads, t0, [px_at, tol_sq](std::size_t ci, std::size_t ni) {
    return double(l2_sq_i(px_at(ci), px_at(ni))) <= tol_sq;
  });
}

FilterKind filter_kind_from_name(const std::string& name) {
  if (name == "vmf") return FilterKind::vmf;
  if (name == "bvdf") return FilterKind::bvdf;
  if (name == "ddf") return FilterKind::ddf;
  if (name == "fpgf1") return FilterKind::fpgf1;
  if (name == "fpgf2") return FilterKind::fpgf2;
  if (name == "fhsf" || name == "fhsf_s") return FilterKind::fhsf_s;
  if (name == "fhsf_hsl") return FilterKind::fhsf_hsl;
  throw error(errc::bad_argument, "unknown filter kind: " + name);
}

std::string filter_kind_name(FilterKind kind) {
  switch (kind) {
    case FilterKind::vmf: return "vmf";
    case FilterKind::bvdf: return "bvdf";
    case FilterKind::ddf: return "ddf";
    case FilterKind::fpgf1: return "fpgf1";
    case FilterKind::fpgf2: return "fpgf2";
    case FilterKind::fhsf_s: return "fhsf_s";
    case FilterKind::fhsf_hsl: return "fhsf_hsl";
  }
  throw error(errc::bad_argument, "unknown filter kind");
}

namespace {

template <typename T>
const T& params_as(const FilterParams& params, const T& defaults) {
  if (std::holds_alternative<std::monostate>(params)) return defaults;
  if (const T* p = std::get_if<T>(&params)) return *p;
  throw error(errc::bad_argument, "filter parameters of wrong shape for kind");
}

void require_no_params(const FilterParams& params) {
  if (!std::holds_alternative<std::monostate>(params))
    throw error(errc::bad_argument, "filter kind takes no parameters");
}

}  // namespace

std::pair<RgbImage, FilterStats> filter_image(const RgbImage& img, FilterKind kind,
                                              const FilterParams& params, int threads) {
  switch (kind) {
    case FilterKind::vmf:
      require_no_params(params);
      return run_uniform(img, threads, [](const Window& w) { return vmf_window(w, 2); });
    case FilterKind::bvdf:
      require_no_params(params);
      return run_uniform(img, threads, [](const Window& w) { return bvdf_window(w); });
    case FilterKind::ddf:
      require_no_params(params);
      return run_uniform(img, threads, [](const Window& w) { return ddf_window(w); });
    case FilterKind::fpgf1: {
      FpgfParams p = params_as<FpgfParams>(params, FpgfParams{3, 90.0, 1});
      p.norm = 1;
      return fpgf_filter(img, p, threads);
    }
    case FilterKind::fpgf2: {
      FpgfParams p = params_as<FpgfParams>(params, FpgfParams{3, 50.0, 2});
      p.norm = 2;
      return fpgf_filter(img, p, threads);
    }
    case FilterKind::fhsf_s:
      return fhsf_filter(img, params_as<FhsfParams>(params, FhsfParams{}), threads);
    case FilterKind::fhsf_hsl: {
      const FhsfHslParams p = params_as<FhsfHslParams>(params, FhsfHslParams{});
      return fhsf_hsl_filter(img, p.m, p.tol, threads);
    }
  }
  throw error(errc::bad_argument, "unknown filter kind");
}

}  // namespace fhsf
