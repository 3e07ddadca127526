#ifndef MP4WM_CONFIG_HPP
#define MP4WM_CONFIG_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mp4wm/experiments.hpp"
#include "mp4wm/params.hpp"

namespace mp4wm {

struct ScanConfig {
  double start = 0;  ///< in the scan variable's config unit (MHz or plain scale)
  double stop = 0;
  std::size_t steps = 0;
  DeltaPolicy delta_policy = DeltaPolicy::track;
};

/// Validated run configuration. Frequencies have already been converted to
/// rad/s, lengths to m and times to s.
struct Config {
  MediumParams medium;
  PulseConfig pulse;
  std::optional<ScanConfig> scan;
};

/// Parses flat `key = value` text. `#` starts a comment. Throws ConfigError
/// carrying the offending line number.
Config parse_config(std::string_view text);

Config load_config(const std::string& path);

/// Keys accepted by parse_config, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace mp4wm

#endif
