#ifndef FHSF_CONFIG_HPP
#define FHSF_CONFIG_HPP

#include <string>

#include "fhsf/colorspace.hpp"
#include "fhsf/metrics.hpp"
#include "fhsf/noise.hpp"

namespace fhsf {

// Tool-wide configuration: colorspace constants, S-CIELAB mixtures and noise
// defaults. Every field is optional in the file; absent fields keep their
// built-in defaults.
struct Config {
  WhitePoint white{};
  OpponentTransform opponent = OpponentTransform::defaults();
  SCielabConfig scielab{};
  NoiseSpec noise{};
};

// JSON file. Throws io_failure if unreadable, bad_config on parse errors or
// a singular opponent matrix.
Config load_config_file(const std::string& path);

// Reads the file named by $FHSF_CONFIG when set, otherwise returns defaults.
Config load_config_from_env();

MetricContext make_metric_context(const Config& cfg, int threads = 1);

std::string noise_spec_to_json(const NoiseSpec& spec);

}  // namespace fhsf

#endif
