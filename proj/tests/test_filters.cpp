#include <doctest.h>

#include <algorithm>
#include <set>

#include "fhsf/errors.hpp"
#include "fhsf/filters.hpp"
#include "fhsf/noise.hpp"
#include "testutil.hpp"

using namespace fhsf;

namespace {

HslWindow to_hsl(const Window& w) {
  HslWindow out;
  for (int i = 0; i < Window::kSize; ++i) out[i] = rgb_to_hsl(w.px[i]);
  return out;
}

Window constant_window(Rgb c) {
  Window w;
  w.px.fill(c);
  return w;
}

// Mirrors the filter's classification using only public pieces: entries whose
// source coordinate is the center itself are ineligible peers.
bool classified_clean(const RgbImage& img, int x, int y, const SimilarityThresholds& t, int m) {
  static constexpr int dx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
  static constexpr int dy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
  unsigned eligible = 0;
  for (int k = 0; k < 8; ++k) {
    const int nx = std::clamp(x + dx[k], 0, img.width() - 1);
    const int ny = std::clamp(y + dy[k], 0, img.height() - 1);
    if (nx != x || ny != y) eligible |= 1u << k;
  }
  return peer_count_hsl(to_hsl(window_at(img, x, y)), t, m, eligible).is_clean;
}

}  // namespace

TEST_CASE("vmf_window basics") {
  CHECK(vmf_window(constant_window(Rgb{5, 6, 7}), 2) == Rgb{5, 6, 7});

  Window w = constant_window(Rgb{10, 10, 10});
  w.px[3] = Rgb{255, 255, 255};
  CHECK(vmf_window(w, 2) == Rgb{10, 10, 10});
  CHECK(vmf_window(w, 1) == Rgb{10, 10, 10});
}

TEST_CASE("bvdf_window basics") {
  CHECK(bvdf_window(constant_window(Rgb{50, 60, 70})) == Rgb{50, 60, 70});

  // 8 pixels along one chromatic ray plus one off-ray outlier
  Window w;
  for (int i = 0; i < 8; ++i)
    w.px[i] = Rgb{std::uint8_t(10 + 5 * i), std::uint8_t(20 + 10 * i), std::uint8_t(30 + 15 * i)};
  w.px[8] = Rgb{200, 10, 10};
  const Rgb out = bvdf_window(w);
  bool on_ray = false;
  for (int i = 0; i < 8; ++i) on_ray |= (out == w.px[i]);
  CHECK(on_ray);
}

TEST_CASE("ddf_window basics") {
  CHECK(ddf_window(constant_window(Rgb{1, 2, 3})) == Rgb{1, 2, 3});
  for (std::uint64_t i = 0; i < 3000; ++i) {
    const Window w = testutil::make_random_window(0xDDF, i);
    const Rgb v = vmf_window(w, 2), b = bvdf_window(w);
    if (v == b) CHECK(ddf_window(w) == v);
  }
}

TEST_CASE("window operations match the brute-force oracles") {
  for (std::uint64_t i = 0; i < 20000; ++i) {
    const Window w = testutil::make_random_window(0x0AC1E, i);
    REQUIRE(vmf_window(w, 2) == testutil::oracle_vmf(w, 2));
    REQUIRE(vmf_window(w, 1) == testutil::oracle_vmf(w, 1));
    REQUIRE(bvdf_window(w) == testutil::oracle_bvdf(w));
    REQUIRE(ddf_window(w) == testutil::oracle_ddf(w));
  }
  // windows with duplicates exercise the lowest-index tie-break
  for (std::uint64_t i = 0; i < 5000; ++i) {
    const Window w = testutil::make_tie_window(0x71E, i);
    REQUIRE(vmf_window(w, 2) == testutil::oracle_vmf(w, 2));
    REQUIRE(bvdf_window(w) == testutil::oracle_bvdf(w));
    REQUIRE(ddf_window(w) == testutil::oracle_ddf(w));
  }
}

TEST_CASE("window operations select, never blend") {
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const Window w = testutil::make_random_window(0x5E1EC7, i);
    for (const Rgb out : {vmf_window(w, 2), bvdf_window(w), ddf_window(w)}) {
      bool member = false;
      for (const Rgb& p : w.px) member |= (p == out);
      REQUIRE(member);
    }
  }
}

TEST_CASE("permuting non-center entries only moves the output across ties") {
  for (std::uint64_t i = 0; i < 3000; ++i) {
    Window w = testutil::make_tie_window(0x9E0, i);
    const Rgb before = vmf_window(w, 2);
    std::swap(w.px[0], w.px[8]);
    std::swap(w.px[1], w.px[3]);
    const Rgb after = vmf_window(w, 2);
    if (!(after == before)) {
      // both must achieve the same minimal aggregate
      auto aggregate = [&w](Rgb c) {
        double s = 0.0;
        for (const Rgb& p : w.px) s += testutil::oracle_lp(c, p, 2);
        return s;
      };
      CHECK(aggregate(after) == doctest::Approx(aggregate(before)).epsilon(1e-12));
    }
  }
}

TEST_CASE("peer_count_hsl anchors") {
  const SimilarityThresholds t{10, 10, 48};
  const HslWindow constant = to_hsl(constant_window(Rgb{100, 30, 60}));
  const PeerScan clean = peer_count_hsl(constant, t, 3);
  CHECK(clean.is_clean);
  CHECK(clean.checks == 3);  // minimum: first m peers settle it

  // center dissimilar from all 8 neighbors: n - m checks
  Window w = constant_window(Rgb{100, 30, 60});
  w.px[Window::kCenter] = Rgb{255, 255, 0};
  const PeerScan noisy = peer_count_hsl(to_hsl(w), t, 3);
  CHECK_FALSE(noisy.is_clean);
  CHECK(noisy.checks == 6);
}

TEST_CASE("peer_count_hsl with m-1 similar neighbors anywhere is never clean") {
  const SimilarityThresholds t{5, 5, 5};
  for (std::uint64_t i = 0; i < 2000; ++i) {
    PixelRng rng(0xBEEF, i);
    Window w;
    const Rgb center{100, 110, 120};
    const Rgb peer{101, 111, 121};      // similar to center
    const Rgb far_off{240, 10, 240};    // dissimilar
    w.px.fill(far_off);
    w.px[Window::kCenter] = center;
    // place exactly m-1 = 2 peers at random non-center slots
    int placed = 0;
    while (placed < 2) {
      const int slot = int(rng.below(9));
      if (slot == Window::kCenter) continue;
      if (!(w.px[slot] == peer)) {
        w.px[slot] = peer;
        ++placed;
      }
    }
    const PeerScan scan = peer_count_hsl(to_hsl(w), t, 3);
    REQUIRE_FALSE(scan.is_clean);
    REQUIRE(scan.checks <= 8);
  }
}

TEST_CASE("peer scan respects the m <= checks <= n-m envelope for m in [1,4]") {
  for (int m = 1; m <= 4; ++m) {
    const SimilarityThresholds t{20, 15, 60};
    for (std::uint64_t i = 0; i < 20000; ++i) {
      const HslWindow w = to_hsl(testutil::make_random_window(0xE417 + m, i));
      const PeerScan scan = peer_count_hsl(w, t, m);
      REQUIRE(scan.checks >= m);
      REQUIRE(scan.checks <= Window::kSize - m);
      if (scan.is_clean) REQUIRE(scan.checks >= m);
    }
  }
}

TEST_CASE("peer_count_hsl rejects out-of-range m") {
  const HslWindow w = to_hsl(constant_window(Rgb{1, 1, 1}));
  CHECK_THROWS_AS(peer_count_hsl(w, SimilarityThresholds{1, 1, 1}, 0), error);
  CHECK_THROWS_AS(peer_count_hsl(w, SimilarityThresholds{1, 1, 1}, 9), error);
}

TEST_CASE("fhsf on a constant image is the identity with zero switches") {
  const RgbImage img = RgbImage::filled(24, 18, Rgb{80, 140, 60});
  const auto [out, stats] = fhsf_filter(img, FhsfParams{});
  CHECK(out == img);
  CHECK(stats.pixels_switched == 0);
  CHECK(stats.elapsed > 0.0);
}

TEST_CASE("fhsf repairs a single impulse to the background color") {
  RgbImage img = RgbImage::filled(21, 17, Rgb{60, 120, 180});
  img.set_pixel(10, 8, Rgb{255, 255, 0});
  const auto [out, stats] = fhsf_filter(img, FhsfParams{});
  CHECK(out == RgbImage::filled(21, 17, Rgb{60, 120, 180}));
  CHECK(stats.pixels_switched == 1);
}

TEST_CASE("fhsf with zero thresholds on distinct pixels equals uniform VMF") {
  const RgbImage img = testutil::make_pairwise_distinct_image(20, 15, 3);
  const auto fhsf = fhsf_filter(img, FhsfParams{3, {0, 0, 0}});
  const auto vmf = filter_image(img, FilterKind::vmf);
  CHECK(fhsf.first == vmf.first);
  CHECK(fhsf.second.pixels_switched == img.pixel_count());
}

TEST_CASE("fhsf_hsl degenerate tolerances") {
  const RgbImage noisy = inject(testutil::make_photo_image(32, 24, 21), NoiseSpec{}).first;
  // tolerance >= cylinder diameter: every neighbor is a peer
  const auto identity = fhsf_hsl_filter(noisy, 3, 1000.0);
  CHECK(identity.first == noisy);
  CHECK(identity.second.pixels_switched == 0);

  const RgbImage distinct = testutil::make_pairwise_distinct_image(18, 13, 5);
  const auto zero_tol = fhsf_hsl_filter(distinct, 3, 0.0);
  const auto vmf = filter_image(distinct, FilterKind::vmf);
  CHECK(zero_tol.first == vmf.first);

  const RgbImage constant = RgbImage::filled(16, 16, Rgb{90, 20, 170});
  const auto on_constant = fhsf_hsl_filter(constant, 3, 40.0);
  CHECK(on_constant.first == constant);
  CHECK(on_constant.second.pixels_switched == 0);
}

TEST_CASE("fpgf degenerate tolerances and impulse repair") {
  const RgbImage img = testutil::make_photo_image(28, 28, 31, 8.0);
  const auto identity = fpgf_filter(img, FpgfParams{3, 765.0, 1});
  CHECK(identity.first == img);

  const RgbImage distinct = testutil::make_pairwise_distinct_image(16, 14, 9);
  const auto zero_tol = fpgf_filter(distinct, FpgfParams{3, 0.0, 2});
  CHECK(zero_tol.first == filter_image(distinct, FilterKind::vmf).first);
  // FPGF1's fallback is the L1 VMF; build the expected image per window
  const auto zero_tol_l1 = fpgf_filter(distinct, FpgfParams{3, 0.0, 1});
  RgbImage expect_l1 = distinct;
  for (int y = 0; y < distinct.height(); ++y)
    for (int x = 0; x < distinct.width(); ++x)
      expect_l1.set_pixel(x, y, vmf_window(window_at(distinct, x, y), 1));
  CHECK(zero_tol_l1.first == expect_l1);

  RgbImage one_impulse = RgbImage::filled(19, 19, Rgb{60, 120, 180});
  one_impulse.set_pixel(9, 9, Rgb{255, 255, 0});
  const auto repaired = fpgf_filter(one_impulse, FpgfParams{3, 30.0, 2});
  CHECK(repaired.first == RgbImage::filled(19, 19, Rgb{60, 120, 180}));
  CHECK(repaired.second.pixels_switched == 1);
}

TEST_CASE("switching filters only change pixels they classified noisy") {
  const RgbImage img =
      inject(testutil::make_photo_image(48, 40, 41, 10.0), testutil::noise_spec(0.1, 4)).first;
  const FhsfParams params{};
  const auto [out, stats] = fhsf_filter(img, params);
  std::size_t changed = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (!(out.pixel(x, y) == img.pixel(x, y))) {
        ++changed;
        CHECK_FALSE(classified_clean(img, x, y, params.thresholds, params.m));
      }
  CHECK(changed <= stats.pixels_switched);
}

TEST_CASE("threshold growth never increases pixels_switched") {
  const RgbImage img =
      inject(testutil::make_photo_image(40, 40, 51, 12.0), testutil::noise_spec(0.1, 6)).first;
  std::size_t prev = SIZE_MAX;
  for (double k = 0.5; k <= 2.01; k += 0.5) {
    FhsfParams p;
    p.thresholds = {10 * k, 10 * k, 48 * k};
    const auto stats = fhsf_filter(img, p).second;
    CHECK(stats.pixels_switched <= prev);
    prev = stats.pixels_switched;
  }
}

TEST_CASE("fhsf needs far fewer distance evaluations than uniform VMF") {
  for (double p : {0.1, 0.2}) {
    NoiseSpec spec;
    spec.p = p;
    spec.seed = 13;
    const RgbImage img = inject(testutil::make_photo_image(64, 64, 61, 10.0), spec).first;
    const auto fhsf = fhsf_filter(img, FhsfParams{});
    const auto vmf = filter_image(img, FilterKind::vmf);
    CHECK(vmf.second.distance_evals == img.pixel_count() * 36);
    CHECK(fhsf.second.distance_evals < vmf.second.distance_evals);
  }
}

TEST_CASE("filter_image dispatch, determinism across workers, bad params") {
  const RgbImage img =
      inject(testutil::make_photo_image(48, 36, 71, 9.0), testutil::noise_spec(0.08, 2)).first;

  const RgbImage constant = RgbImage::filled(10, 10, Rgb{1, 2, 3});
  CHECK(filter_image(constant, FilterKind::vmf).first == constant);

  for (const FilterKind kind : {FilterKind::vmf, FilterKind::bvdf, FilterKind::ddf,
                                FilterKind::fpgf1, FilterKind::fpgf2, FilterKind::fhsf_s,
                                FilterKind::fhsf_hsl}) {
    const auto single = filter_image(img, kind, {}, 1);
    const auto pooled = filter_image(img, kind, {}, 8);
    REQUIRE(single.first == pooled.first);
    REQUIRE(single.second.pixels_switched == pooled.second.pixels_switched);
    REQUIRE(single.second.distance_evals == pooled.second.distance_evals);
  }

  CHECK_THROWS_AS(filter_image(img, FilterKind::vmf, FhsfParams{}), error);
  CHECK_THROWS_AS(filter_image(img, FilterKind::fhsf_s, FpgfParams{}), error);
  CHECK_THROWS_AS(filter_kind_from_name("nope"), error);
  CHECK_THROWS_AS(fhsf_filter(img, FhsfParams{0, {1, 1, 1}}), error);
  CHECK_THROWS_AS(fhsf_filter(img, FhsfParams{3, {-1, 1, 1}}), error);
  CHECK_THROWS_AS(fpgf_filter(img, FpgfParams{3, -2.0, 2}), error);
  CHECK_THROWS_AS(fpgf_filter(img, FpgfParams{3, 10.0, 3}), error);
}

TEST_CASE("fhsf leaves a noise-free smooth image nearly untouched") {
  const RgbImage img = testutil::make_photo_image(96, 96, 81);
  const auto [out, stats] = fhsf_filter(img, FhsfParams{});
  std::size_t unchanged = 0;
  for (std::size_t i = 0; i < img.data().size(); i += 3)
    unchanged += (img.data()[i] == out.data()[i] && img.data()[i + 1] == out.data()[i + 1] &&
                  img.data()[i + 2] == out.data()[i + 2]);
  CHECK(double(unchanged) >= 0.95 * double(img.pixel_count()));
}

TEST_CASE("every filter output pixel comes from its source window") {
  const RgbImage img =
      inject(testutil::make_photo_image(30, 26, 91, 10.0), testutil::noise_spec(0.15, 8)).first;
  for (const FilterKind kind : {FilterKind::vmf, FilterKind::bvdf, FilterKind::ddf,
                                FilterKind::fpgf2, FilterKind::fhsf_s, FilterKind::fhsf_hsl}) {
    const RgbImage out = filter_image(img, kind).first;
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x) {
        const Window w = window_at(img, x, y);
        bool member = false;
        for (const Rgb& p : w.px) member |= (p == out.pixel(x, y));
        REQUIRE(member);
      }
  }
}
