#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "fade/clustering.hpp"
#include "fade/detector.hpp"
#include "fade/frame_io.hpp"
#include "fade/imm.hpp"
#include "fade/tracking.hpp"

namespace fade {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  ClusterConfig clustering;
  TrackerConfig tracker;
  ImmConfig imm;
  DetectorConfig detector;

  /// Takes the frame period from the stream and ties the IMM switch level to
  /// the detector's probability threshold.
  void bind_stream(const StreamHeader& header);
  void validate() const;
};

/// Accepts nested sections ({"tracker": {"v_max": 3}}) or dotted keys
/// ({"tracker.v_max": 3}). Unknown keys throw ConfigError.
PipelineConfig parse_config(const std::string& json_text);
PipelineConfig read_config(const std::filesystem::path& path);
std::string config_to_json(const PipelineConfig& cfg);

}  // namespace fade
