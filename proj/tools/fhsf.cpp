// Command-line front end: impulsive noise injection, the filter suite,
// quality metrics, a benchmark harness and the parameter tuner.

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fhsf/config.hpp"
#include "fhsf/errors.hpp"
#include "fhsf/filters.hpp"
#include "fhsf/image.hpp"
#include "fhsf/metrics.hpp"
#include "fhsf/noise.hpp"
#include "fhsf/tuner.hpp"

namespace {

using namespace fhsf;

struct NoiseFlags {
  double p = -1.0;  // <0 means "not set on the command line"
  std::vector<double> mix;
  std::vector<int> impulses;
  std::int64_t seed = -1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--p", p, "corruption probability")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--mix", mix, "R/G/B/all corruption weights")->delimiter(',')->expected(4);
    cmd->add_option("--impulses", impulses, "impulse channel values")->delimiter(',');
    cmd->add_option("--seed", seed, "noise RNG seed")->check(CLI::NonNegativeNumber);
  }

  NoiseSpec resolve(const Config& cfg) const {
    NoiseSpec spec = cfg.noise;
    if (p >= 0.0) spec.p = p;
    if (!mix.empty()) std::copy(mix.begin(), mix.end(), spec.channel_mix.begin());
    if (!impulses.empty()) {
      spec.impulse_values.clear();
      for (int v : impulses) {
        if (v < 0 || v > 255) throw error(errc::bad_argument, "impulse values must be in [0,255]");
        spec.impulse_values.push_back(static_cast<std::uint8_t>(v));
      }
    }
    if (seed >= 0) spec.seed = static_cast<std::uint64_t>(seed);
    spec.validate();
    return spec;
  }
};

struct FilterFlags {
  std::string kind = "fhsf_s";
  int m = -1;
  double ht = -1.0, st = -1.0, lt = -1.0;
  double tol = -1.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--kind", kind, "vmf|bvdf|ddf|fpgf1|fpgf2|fhsf_s|fhsf_hsl");
    cmd->add_option("--m", m, "peer group size")->check(CLI::Range(1, 8));
    cmd->add_option("--ht", ht, "hue threshold (degrees)");
    cmd->add_option("--st", st, "saturation threshold");
    cmd->add_option("--lt", lt, "lightness threshold");
    cmd->add_option("--tol", tol, "distance tolerance (fpgf/fhsf_hsl)");
  }

  FilterParams resolve(FilterKind k) const {
    switch (k) {
      case FilterKind::fhsf_s: {
        FhsfParams p;
        if (m > 0) p.m = m;
        if (ht >= 0.0) p.thresholds.ht = ht;
        if (st >= 0.0) p.thresholds.st = st;
        if (lt >= 0.0) p.thresholds.lt = lt;
        return p;
      }
      case FilterKind::fhsf_hsl: {
        FhsfHslParams p;
        if (m > 0) p.m = m;
        if (tol >= 0.0) p.tol = tol;
        return p;
      }
      case FilterKind::fpgf1:
      case FilterKind::fpgf2: {
        FpgfParams p{3, k == FilterKind::fpgf1 ? 90.0 : 50.0, k == FilterKind::fpgf1 ? 1 : 2};
        if (m > 0) p.m = m;
        if (tol >= 0.0) p.tol = tol;
        return p;
      }
      default:
        return std::monostate{};
    }
  }
};

void print_stats(const FilterStats& stats) {
  std::printf("pixels_switched=%zu\n", stats.pixels_switched);
  std::printf("distance_evals=%zu\n", stats.distance_evals);
  std::printf("elapsed=%.6f\n", stats.elapsed);
}

void save_mask_pgm(const CorruptionMask& mask, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error(errc::io_failure, "cannot open " + path + " for writing");
  out << "P5\n" << mask.width << " " << mask.height << "\n255\n";
  for (std::uint8_t v : mask.hit) out.put(v ? char(255) : char(0));
  if (!out) throw error(errc::io_failure, "write failed: " + path);
}

double median3(double a, double b, double c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

struct BenchRow {
  std::string name;
  MetricReport metrics;
  double time = 0.0;  // <= 0 for the NONE row
};

void print_bench_table(const std::vector<BenchRow>& rows) {
  std::printf("%-10s %10s %12s %10s %10s %10s\n", "Filter", "MAE", "MSE", "NCD", "PCD", "Time");
  for (const BenchRow& r : rows) {
    std::printf("%-10s %10.3f %12.3f %10.6f %10.3f ", r.name.c_str(), r.metrics.mae,
                r.metrics.mse, r.metrics.ncd, r.metrics.pcd);
    if (r.time > 0.0)
      std::printf("%10.3f\n", r.time);
    else
      std::printf("%10s\n", "-");
  }
}

void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw error(errc::io_failure, "cannot open " + path + " for writing");
  out << "filter,mae,mse,ncd,pcd,time_s\n";
  char line[256];
  for (const BenchRow& r : rows) {
    std::snprintf(line, sizeof line, "%s,%.6f,%.6f,%.8f,%.6f,", r.name.c_str(), r.metrics.mae,
                  r.metrics.mse, r.metrics.ncd, r.metrics.pcd);
    out << line;
    if (r.time > 0.0) out << r.time;
    out << "\n";
  }
  if (!out) throw error(errc::io_failure, "write failed: " + path);
}

int run(int argc, char** argv) {
  CLI::App app{"HSL-based switching filter toolkit for impulsive noise removal"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file (default: $FHSF_CONFIG when set)");

  auto load_cfg = [&config_path]() {
    return config_path.empty() ? load_config_from_env() : load_config_file(config_path);
  };

  // ---- noise ----
  auto* cmd_noise = app.add_subcommand("noise", "inject impulsive noise");
  std::string noise_in, noise_out, mask_out;
  NoiseFlags noise_flags;
  cmd_noise->add_option("--in", noise_in, "input PPM")->required();
  cmd_noise->add_option("--out", noise_out, "output PPM")->required();
  cmd_noise->add_option("--mask-out", mask_out, "corruption mask PGM");
  noise_flags.add_to(cmd_noise);
  cmd_noise->callback([&] {
    const NoiseSpec spec = noise_flags.resolve(load_cfg());
    const RgbImage img = load_ppm(noise_in);
    auto [noisy, mask] = inject(img, spec);
    save_ppm(noisy, noise_out);
    if (!mask_out.empty()) save_mask_pgm(mask, mask_out);
    std::printf("corrupted_pixels=%zu\n", mask.count());
  });

  // ---- filter ----
  auto* cmd_filter = app.add_subcommand("filter", "run one filter over an image");
  std::string filter_in, filter_out;
  FilterFlags filter_flags;
  int filter_threads = 1;
  cmd_filter->add_option("--in", filter_in, "input PPM")->required();
  cmd_filter->add_option("--out", filter_out, "output PPM")->required();
  cmd_filter->add_option("--threads", filter_threads, "worker threads")->check(CLI::Range(1, 64));
  filter_flags.add_to(cmd_filter);
  cmd_filter->callback([&] {
    const FilterKind kind = filter_kind_from_name(filter_flags.kind);
    const RgbImage img = load_ppm(filter_in);
    auto [out, stats] = filter_image(img, kind, filter_flags.resolve(kind), filter_threads);
    save_ppm(out, filter_out);
    print_stats(stats);
  });

  // ---- metrics ----
  auto* cmd_metrics = app.add_subcommand("metrics", "compare two images");
  std::string met_original, met_image;
  bool met_csv = false;
  int met_threads = 1;
  cmd_metrics->add_option("--original", met_original, "reference PPM")->required();
  cmd_metrics->add_option("--image", met_image, "processed PPM")->required();
  cmd_metrics->add_flag("--csv", met_csv, "emit a CSV row instead of the table");
  cmd_metrics->add_option("--threads", met_threads, "worker threads")->check(CLI::Range(1, 64));
  cmd_metrics->callback([&] {
    const MetricContext ctx = make_metric_context(load_cfg(), met_threads);
    const RgbImage a = load_ppm(met_original);
    const RgbImage b = load_ppm(met_image);
    const MetricReport r = metric_report(a, b, ctx);
    if (met_csv) {
      std::printf("mae,mse,ncd,pcd,elapsed\n");
      std::printf("%.6f,%.6f,%.8f,%.6f,%.6f\n", r.mae, r.mse, r.ncd, r.pcd, r.elapsed);
    } else {
      std::printf("%-8s %12s\n", "Metric", "Value");
      std::printf("%-8s %12.6f\n", "MAE", r.mae);
      std::printf("%-8s %12.6f\n", "MSE", r.mse);
      std::printf("%-8s %12.8f\n", "NCD", r.ncd);
      std::printf("%-8s %12.6f\n", "PCD", r.pcd);
      std::printf("%-8s %12.6f\n", "elapsed", r.elapsed);
    }
  });

  // ---- bench ----
  auto* cmd_bench = app.add_subcommand("bench", "noise + filters + metrics report");
  std::string bench_in, bench_csv;
  std::vector<std::string> bench_filters = {"vmf", "fpgf2", "fpgf1", "fhsf_hsl", "fhsf_s"};
  NoiseFlags bench_noise;
  int bench_threads = 1, bench_reps = 3;
  cmd_bench->add_option("--in", bench_in, "clean original PPM")->required();
  cmd_bench->add_option("--filters", bench_filters, "filters to run")->delimiter(',');
  cmd_bench->add_option("--csv", bench_csv, "also write the report as CSV");
  cmd_bench->add_option("--threads", bench_threads, "worker threads")->check(CLI::Range(1, 64));
  cmd_bench->add_option("--reps", bench_reps, "timing repetitions")->check(CLI::Range(1, 9));
  bench_noise.add_to(cmd_bench);
  cmd_bench->callback([&] {
    const Config cfg = load_cfg();
    const NoiseSpec spec = bench_noise.resolve(cfg);
    const MetricContext ctx = make_metric_context(cfg, bench_threads);
    const RgbImage original = load_ppm(bench_in);
    const RgbImage noisy = inject(original, spec).first;

    std::vector<BenchRow> rows;
    rows.push_back({"NONE", metric_report(original, noisy, ctx), 0.0});
    for (const std::string& name : bench_filters) {
      const FilterKind kind = filter_kind_from_name(name);
      RgbImage filtered;
      std::vector<double> times;
      for (int rep = 0; rep < bench_reps; ++rep) {
        auto [out, stats] = filter_image(noisy, kind, {}, bench_threads);
        times.push_back(stats.elapsed);
        if (rep == 0) filtered = std::move(out);
      }
      std::sort(times.begin(), times.end());
      const double time = times.size() >= 3
                              ? median3(times[0], times[times.size() / 2], times.back())
                              : times[times.size() / 2];
      rows.push_back({filter_kind_name(kind), metric_report(original, filtered, ctx), time});
    }
    print_bench_table(rows);
    if (!bench_csv.empty()) write_bench_csv(rows, bench_csv);
  });

  // ---- tune ----
  auto* cmd_tune = app.add_subcommand("tune", "grid-search FHSF parameters");
  std::vector<std::string> tune_images;
  std::string grid_m = "1:8:1", grid_ht = "6:20:2", grid_st = "4:16:2", grid_lt = "32:64:4";
  std::string tune_csv;
  double tune_fraction = 0.05;
  NoiseFlags tune_noise;
  int tune_threads = 1;
  cmd_tune->add_option("--images", tune_images, "clean PPM images")->required()->delimiter(',');
  cmd_tune->add_option("--grid-m", grid_m, "m axis lo:hi:step");
  cmd_tune->add_option("--grid-ht", grid_ht, "Ht axis lo:hi:step");
  cmd_tune->add_option("--grid-st", grid_st, "St axis lo:hi:step");
  cmd_tune->add_option("--grid-lt", grid_lt, "Lt axis lo:hi:step");
  cmd_tune->add_option("--fraction", tune_fraction, "top fraction for the intersection")
      ->check(CLI::Range(1e-6, 1.0));
  cmd_tune->add_option("--out", tune_csv, "write per-image/config CSV");
  cmd_tune->add_option("--threads", tune_threads, "worker threads")->check(CLI::Range(1, 64));
  tune_noise.add_to(cmd_tune);
  cmd_tune->callback([&] {
    const Config cfg = load_cfg();
    ParamGrid grid;
    grid.m = GridAxis::parse(grid_m);
    grid.ht = GridAxis::parse(grid_ht);
    grid.st = GridAxis::parse(grid_st);
    grid.lt = GridAxis::parse(grid_lt);
    grid.validate();

    std::vector<RgbImage> images;
    for (const std::string& path : tune_images) images.push_back(load_ppm(path));

    const NoiseSpec spec = tune_noise.resolve(cfg);
    const MetricContext ctx = make_metric_context(cfg, tune_threads);
    const TuneResult result = grid_search(images, spec, grid, ctx);

    if (!tune_csv.empty()) {
      std::ofstream out(tune_csv, std::ios::trunc);
      if (!out) throw error(errc::io_failure, "cannot open " + tune_csv + " for writing");
      out << "image,m,ht,st,lt,pcd\n";
      for (std::size_t img = 0; img < images.size(); ++img)
        for (std::size_t flat = 0; flat < grid.size(); ++flat) {
          const FhsfParams p = grid.config(flat);
          char line[256];
          std::snprintf(line, sizeof line, "%s,%d,%g,%g,%g,%.6f\n", tune_images[img].c_str(),
                        p.m, p.thresholds.ht, p.thresholds.st, p.thresholds.lt,
                        result.pcd[img][flat]);
          out << line;
        }
    }

    std::printf("configurations=%zu\n", grid.size());
    const auto best = result.global_ranking().front();
    const FhsfParams bp = result.grid.config(best);
    std::printf("best_overall: m=%d ht=%g st=%g lt=%g\n", bp.m, bp.thresholds.ht,
                bp.thresholds.st, bp.thresholds.lt);

    const auto common = top_fraction_intersect(result, tune_fraction);
    if (common.empty()) {
      std::printf("top_%.0f%%_intersection: empty (no configuration is in the top "
                  "fraction of every image)\n",
                  tune_fraction * 100.0);
    } else {
      double m_lo = 9e9, m_hi = -9e9, h_lo = 9e9, h_hi = -9e9;
      double s_lo = 9e9, s_hi = -9e9, l_lo = 9e9, l_hi = -9e9;
      for (std::size_t flat : common) {
        const FhsfParams p = result.grid.config(flat);
        m_lo = std::min(m_lo, double(p.m)), m_hi = std::max(m_hi, double(p.m));
        h_lo = std::min(h_lo, p.thresholds.ht), h_hi = std::max(h_hi, p.thresholds.ht);
        s_lo = std::min(s_lo, p.thresholds.st), s_hi = std::max(s_hi, p.thresholds.st);
        l_lo = std::min(l_lo, p.thresholds.lt), l_hi = std::max(l_hi, p.thresholds.lt);
      }
      std::printf("top_%.0f%%_intersection: %zu configurations\n", tune_fraction * 100.0,
                  common.size());
      std::printf("recommended_ranges: m=[%g,%g] ht=[%g,%g] st=[%g,%g] lt=[%g,%g]\n", m_lo,
                  m_hi, h_lo, h_hi, s_lo, s_hi, l_lo, l_hi);
    }

    std::printf("min_pcd_per_m:\n");
    for (const auto& [m_value, minima] : min_pcd_per_m(result)) {
      std::printf("  m=%d:", m_value);
      for (double v : minima) std::printf(" %.6f", v);
      std::printf("\n");
    }
  });

  // ---- convert ----
  auto* cmd_convert = app.add_subcommand("convert", "RGB<->HSL debug dumps");
  std::string conv_in, conv_out;
  bool conv_from_hsl = false;
  cmd_convert->add_option("--in", conv_in, "input (PPM, or HSL CSV with --from-hsl)")
      ->required();
  cmd_convert->add_option("--out", conv_out, "output (CSV, or PPM with --from-hsl)")
      ->required();
  cmd_convert->add_flag("--from-hsl", conv_from_hsl, "rebuild a PPM from an HSL CSV");
  cmd_convert->callback([&] {
    if (!conv_from_hsl) {
      const RgbImage img = load_ppm(conv_in);
      std::ofstream out(conv_out, std::ios::trunc);
      if (!out) throw error(errc::io_failure, "cannot open " + conv_out + " for writing");
      out << "x,y,h,s,l\n";
      const HslImage plane = hsl_plane(img);
      char line[160];
      for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
          const HslPixel& p = plane.at(x, y);
          std::snprintf(line, sizeof line, "%d,%d,%.17g,%.17g,%.17g\n", x, y, p.h, p.s, p.l);
          out << line;
        }
      if (!out) throw error(errc::io_failure, "write failed: " + conv_out);
      return;
    }
    std::ifstream in(conv_in);
    if (!in) throw error(errc::io_failure, "cannot open " + conv_in);
    std::string header;
    std::getline(in, header);
    struct Entry { int x, y; HslPixel p; };
    std::vector<Entry> entries;
    int w = 0, h = 0;
    std::string row;
    while (std::getline(in, row)) {
      Entry e;
      if (std::sscanf(row.c_str(), "%d,%d,%lf,%lf,%lf", &e.x, &e.y, &e.p.h, &e.p.s, &e.p.l) != 5)
        throw error(errc::bad_header, "bad HSL CSV row: " + row);
      w = std::max(w, e.x + 1);
      h = std::max(h, e.y + 1);
      entries.push_back(e);
    }
    if (entries.empty()) throw error(errc::bad_header, "empty HSL CSV");
    RgbImage img(w, h);
    for (const Entry& e : entries) img.set_pixel(e.x, e.y, hsl_to_rgb(e.p));
    save_ppm(img, conv_out);
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fhsf::error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
