#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fhsf/errors.hpp"
#include "fhsf/filters.hpp"
#include "fhsf/metrics.hpp"
#include "fhsf/noise.hpp"
#include "testutil.hpp"

using namespace fhsf;
using doctest::Approx;

TEST_CASE("mae and mse closed forms") {
  const RgbImage a = RgbImage::filled(10, 10, Rgb{100, 100, 100});
  CHECK(mae(a, a) == 0.0);
  CHECK(mse(a, a) == 0.0);

  RgbImage b = a;
  b.set_pixel(3, 4, Rgb{130, 100, 100});  // one channel off by 30
  CHECK(mae(a, b) == Approx(0.1).epsilon(1e-15));
  CHECK(mse(a, b) == Approx(900.0 / 300.0).epsilon(1e-15));

  RgbImage c = a;
  c.set_pixel(0, 0, Rgb{160, 100, 100});  // doubled difference
  CHECK(mae(a, c) == Approx(2 * mae(a, b)).epsilon(1e-12));
  CHECK(mse(a, c) == Approx(4 * mse(a, b)).epsilon(1e-12));

  CHECK_THROWS_AS(mae(a, RgbImage::filled(9, 10, Rgb{})), error);
  CHECK_THROWS_AS(mse(a, RgbImage::filled(10, 9, Rgb{})), error);
}

TEST_CASE("ncd basics, closed form and asymmetry") {
  const RgbImage a = RgbImage::filled(8, 8, Rgb{200, 40, 90});
  CHECK(ncd(a, a) == 0.0);

  const Rgb c1{200, 40, 90}, c2{90, 200, 40};
  const RgbImage u1 = RgbImage::filled(6, 5, c1), u2 = RgbImage::filled(6, 5, c2);
  const LabPixel l1 = srgb_to_lab(c1), l2 = srgb_to_lab(c2);
  const double expect = delta_e(l1, l2) / std::sqrt(l1.L * l1.L + l1.a * l1.a + l1.b * l1.b);
  CHECK(ncd(u1, u2) == Approx(expect).epsilon(1e-12));

  // normalizes by the first argument, so swapping them changes the value
  CHECK(ncd(u1, u2) != ncd(u2, u1));

  const RgbImage black = RgbImage::filled(4, 4, Rgb{0, 0, 0});
  CHECK_THROWS_AS(ncd(black, u1), error);
  CHECK_THROWS_AS(ncd(u1, RgbImage::filled(3, 3, c2)), error);
}

TEST_CASE("scielab_map is zero on identical images") {
  const RgbImage img = testutil::make_photo_image(40, 30, 17);
  const auto field = scielab_map(img, img);
  for (double v : field) CHECK(v == 0.0);
}

TEST_CASE("uniform image pairs reduce to the plain Lab difference") {
  const Rgb c1{180, 90, 40}, c2{40, 90, 180};
  const RgbImage u1 = RgbImage::filled(24, 16, c1), u2 = RgbImage::filled(24, 16, c2);
  const double plain = delta_e(srgb_to_lab(c1), srgb_to_lab(c2));

  const auto field = scielab_map(u1, u2);
  for (double v : field) CHECK(v == Approx(plain).epsilon(1e-9));
  CHECK(pcd(u1, u2) == Approx(plain).epsilon(1e-9));
}

TEST_CASE("an impulse difference is spread and attenuated") {
  const RgbImage base = RgbImage::filled(33, 33, Rgb{120, 120, 120});
  RgbImage spot = base;
  spot.set_pixel(16, 16, Rgb{255, 0, 0});

  const double plain = delta_e(srgb_to_lab(Rgb{120, 120, 120}), srgb_to_lab(Rgb{255, 0, 0}));
  const auto field = scielab_map(base, spot);
  const double peak = *std::max_element(field.begin(), field.end());
  CHECK(peak < plain);  // blur strictly attenuates a point difference
  CHECK(peak > 0.0);
  double total = 0.0;
  for (double v : field) total += v;
  CHECK(total > 0.0);
  CHECK(total < plain * double(field.size()));
}

TEST_CASE("pcd trivial cases") {
  const RgbImage img = testutil::make_photo_image(32, 32, 23);
  CHECK(pcd(img, img) == 0.0);
  CHECK_THROWS_AS(pcd(img, RgbImage::filled(5, 5, Rgb{})), error);
}

TEST_CASE("metric_report is all-zero iff identical") {
  const RgbImage img = testutil::make_photo_image(32, 24, 29);
  const MetricReport same = metric_report(img, img, {});
  CHECK(same.mae == 0.0);
  CHECK(same.mse == 0.0);
  CHECK(same.ncd == 0.0);
  CHECK(same.pcd == 0.0);

  RgbImage other = img;
  other.set_pixel(1, 1, Rgb{255, 255, 255});
  const MetricReport diff = metric_report(img, other, {});
  CHECK(diff.mae > 0.0);
  CHECK(diff.mse > 0.0);
  CHECK(diff.ncd > 0.0);
  CHECK(diff.pcd > 0.0);
}

TEST_CASE("all four metrics drop after FHSF filtering of a noisy image") {
  const RgbImage original = testutil::make_photo_image(128, 128, 37, 8.0);
  for (double p : {0.05, 0.10, 0.15}) {
    const RgbImage noisy = inject(original, testutil::noise_spec(p, 19)).first;
    const RgbImage filtered = fhsf_filter(noisy, FhsfParams{}).first;

    CHECK(mae(original, filtered) < mae(original, noisy));
    CHECK(mse(original, filtered) < mse(original, noisy));
    CHECK(ncd(original, filtered) < ncd(original, noisy));

    const MetricContext ctx;
    const auto ref = scielab_lab_field(original, ctx);
    const double pcd_noisy = mean_delta_e(ref, scielab_lab_field(noisy, ctx));
    const double pcd_filtered = mean_delta_e(ref, scielab_lab_field(filtered, ctx));
    CHECK(pcd_filtered < pcd_noisy);
  }
}

TEST_CASE("scielab field computation is worker-count independent") {
  const RgbImage a = testutil::make_photo_image(48, 40, 43, 6.0);
  MetricContext one;
  one.threads = 1;
  MetricContext eight;
  eight.threads = 8;
  const auto fa = scielab_lab_field(a, one);
  const auto fb = scielab_lab_field(a, eight);
  REQUIRE(fa.size() == fb.size());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    REQUIRE(fa[i].L == fb[i].L);
    REQUIRE(fa[i].a == fb[i].a);
    REQUIRE(fa[i].b == fb[i].b);
  }
}

TEST_CASE("scielab config validation") {
  SCielabConfig bad_spd;
  bad_spd.samples_per_degree = 0.0;
  CHECK_THROWS_AS(bad_spd.validate(), error);

  SCielabConfig bad_spread;
  bad_spread.planes[1][0].spread_deg = 0.0;
  CHECK_THROWS_AS(bad_spread.validate(), error);

  SCielabConfig zero_weights;
  zero_weights.planes[2] = {{1.0, 0.5}, {-1.0, 0.5}};
  CHECK_THROWS_AS(zero_weights.validate(), error);
}
