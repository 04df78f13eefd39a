#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "fade/config.hpp"
#include "fade/detector.hpp"
#include "fade/events.hpp"
#include "fade/frame_io.hpp"
#include "fade/tracking.hpp"

namespace fade {

struct FrameTiming {
  std::int64_t frame_index = 0;
  double t = 0.0;
  std::size_t points = 0;
  std::size_t clusters = 0;
  std::size_t tracks = 0;  // confirmed tracks after the frame
  double ms = 0.0;         // wall clock spent on the frame
};

/// Clustering, tracking and fall decision for one sensor stream.
class Pipeline {
 public:
  Pipeline(PipelineConfig cfg, const StreamHeader& header);

  /// Consumes one sensor-frame point cloud. Frames skipped in the index
  /// sequence are replayed as empty frames so the tracks coast across them.
  std::vector<FallEvent> process(const PointFrame& frame, FrameTiming* timing = nullptr,
                                 std::vector<FeatureRow>* trace = nullptr);

  const Tracker& tracker() const { return tracker_; }
  const FallDetector& detector() const { return detector_; }
  const PipelineConfig& config() const { return cfg_; }

 private:
  std::vector<FallEvent> step(const PointFrame& world, std::size_t* clusters, std::vector<FeatureRow>* trace);

  PipelineConfig cfg_;
  StreamHeader header_;
  Tracker tracker_;
  FallDetector detector_;
  std::optional<std::int64_t> last_index_;
};

struct PipelineResult {
  std::vector<FallEvent> events;
  std::vector<FeatureRow> features;
  std::vector<FrameTiming> timing;
};

PipelineResult run_pipeline(const FrameStream& stream, const PipelineConfig& cfg, bool keep_features = true);
PipelineResult run_pipeline(const std::filesystem::path& frames, const std::filesystem::path& config);

void write_features_csv(std::ostream& out, const std::vector<FeatureRow>& rows);
void write_features_csv(const std::filesystem::path& path, const std::vector<FeatureRow>& rows);
void write_timing_csv(std::ostream& out, const std::vector<FrameTiming>& rows);
void write_timing_csv(const std::filesystem::path& path, const std::vector<FrameTiming>& rows);

}  // namespace fade
