#pragma once

#include <filesystem>
#include <string>

#include "mctrack/synthetic.hpp"
#include "mctrack/tracker.hpp"

namespace mct {

/// Tracker and synthetic-sequence settings read from one flat JSON object.
struct RunConfig {
  TrackerConfig tracker;
  SyntheticSpec synthetic = demo_spec();
};

/// Parses a flat key-value JSON object; unknown keys are a usage error.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);
/// All keys with their current values, pretty-printed.
std::string dump_config(const RunConfig& cfg);

}  // namespace mct
