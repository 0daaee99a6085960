#include "fhsf/config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "fhsf/errors.hpp"

namespace fhsf {

namespace {

using nlohmann::json;

std::vector<GaussComponent> parse_plane(const json& j) {
  std::vector<GaussComponent> plane;
  for (const auto& pair : j)
    plane.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
  return plane;
}

Config parse_config(const json& j) {
  Config cfg;
  if (j.contains("white_point")) {
    const auto& wp = j.at("white_point");
    cfg.white = {wp.at("x").get<double>(), wp.at("y").get<double>(), wp.at("z").get<double>()};
  }
  if (j.contains("opponent_matrix")) {
    double m[3][3];
    const auto& rows = j.at("opponent_matrix");
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m[r][c] = rows.at(r).at(c).get<double>();
    cfg.opponent = OpponentTransform::from_matrix(m);  // singular -> bad_config
  }
  if (j.contains("scielab")) {
    const auto& sc = j.at("scielab");
    if (sc.contains("samples_per_degree"))
      cfg.scielab.samples_per_degree = sc.at("samples_per_degree").get<double>();
    if (sc.contains("planes")) {
      const auto& planes = sc.at("planes");
      for (int p = 0; p < 3; ++p) cfg.scielab.planes[p] = parse_plane(planes.at(p));
    }
    cfg.scielab.validate();
  }
  if (j.contains("noise")) {
    const auto& nz = j.at("noise");
    if (nz.contains("p")) cfg.noise.p = nz.at("p").get<double>();
    if (nz.contains("mix")) {
      const auto& mix = nz.at("mix");
      for (int i = 0; i < 4; ++i) cfg.noise.channel_mix[i] = mix.at(i).get<double>();
    }
    if (nz.contains("impulses"))
      cfg.noise.impulse_values = nz.at("impulses").get<std::vector<std::uint8_t>>();
    if (nz.contains("seed")) cfg.noise.seed = nz.at("seed").get<std::uint64_t>();
    cfg.noise.validate();
  }
  return cfg;
}

}  // namespace

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io_failure, "cannot open config file " + path);
  json j;
  try {
    in >> j;
    return parse_config(j);
  } catch (const error&) {
    throw;
  } catch (const std::exception& e) {
    throw error(errc::bad_config, std::string("config rejected: ") + e.what());
  }
}

Config load_config_from_env() {
  const char* path = std::getenv("FHSF_CONFIG");
  if (path == nullptr || *path == '\0') return Config{};
  return load_config_file(path);
}

MetricContext make_metric_context(const Config& cfg, int threads) {
  MetricContext ctx;
  ctx.white = cfg.white;
  ctx.opponent = cfg.opponent;
  ctx.scielab = cfg.scielab;
  ctx.threads = threads;
  return ctx;
}

std::string noise_spec_to_json(const NoiseSpec& spec) {
  nlohmann::json j;
  j["noise"]["p"] = spec.p;
  j["noise"]["mix"] = spec.channel_mix;
  j["noise"]["impulses"] = spec.impulse_values;
  j["noise"]["seed"] = spec.seed;
  return j.dump(2);
}

}  // namespace fhsf
