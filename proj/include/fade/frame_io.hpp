#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fade {

inline constexpr double kDefaultFramePeriod = 0.05;  // s
inline constexpr double kMaxRange = 7.28;            // m, unambiguous range
inline constexpr double kMaxSpeed = 8.5556;          // m/s, unambiguous Doppler
inline constexpr const char* kFrameFormat = "fade-frames/1";

/// One detection. Coordinates are in the sensor frame as read from disk and
/// in the world frame (z = height above floor) after sensor_to_world.
struct RadarPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double doppler = 0.0;  // radial speed, m/s, positive when receding
  double snr = 0.0;      // dB

  bool operator==(const RadarPoint&) const = default;
};

struct PointFrame {
  std::int64_t frame_index = 0;
  double t = 0.0;
  std::vector<RadarPoint> points;

  bool operator==(const PointFrame&) const = default;
};

/// Radar mounting: height of the antenna above the floor and downward tilt
/// of the boresight. The sensor frame has x lateral, y along boresight and
/// z up (relative to the tilted board).
struct SensorPose {
  double height = 2.0;  // m
  double tilt = 0.0;    // rad, downward positive

  bool operator==(const SensorPose&) const = default;
};

struct StreamHeader {
  double t_frame = kDefaultFramePeriod;
  SensorPose pose;

  bool operator==(const StreamHeader&) const = default;
};

struct FrameStream {
  StreamHeader header;
  std::vector<PointFrame> frames;
  std::size_t rejected_points = 0;  // dropped for exceeding radar limits
};

/// Base for every error caused by bad input data (as opposed to bad usage).
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class MalformedRecord : public DataError {
 public:
  using DataError::DataError;
};

class NonMonotoneTime : public DataError {
 public:
  using DataError::DataError;
};

/// Incremental reader for the JSON Lines frame format. The header line is
/// optional; when absent the defaults of StreamHeader apply.
class FrameReader {
 public:
  explicit FrameReader(std::istream& in);

  const StreamHeader& header() const { return header_; }
  std::size_t rejected_points() const { return rejected_; }

  /// Next frame in the stream, or nullopt at end of input.
  std::optional<PointFrame> next();

 private:
  bool read_line(std::string& line);
  void parse_header(const std::string& line);
  PointFrame parse_frame(const std::string& line);

  std::istream& in_;
  StreamHeader header_;
  std::size_t line_no_ = 0;
  std::size_t rejected_ = 0;
  std::optional<std::string> pending_;
  std::optional<std::int64_t> last_index_;
  std::optional<double> last_t_;
};

FrameStream parse_frame_stream(std::istream& in);
FrameStream read_frame_stream(const std::filesystem::path& path);

void write_frame_stream(std::ostream& out, const StreamHeader& header,
                        const std::vector<PointFrame>& frames);
void write_frame_stream(const std::filesystem::path& path, const StreamHeader& header,
                        const std::vector<PointFrame>& frames);

/// True when a sensor-frame point lies inside the radar's unambiguous range
/// and speed limits.
bool within_radar_limits(const RadarPoint& sensor_point);

/// Rigid transform: rotate by -tilt about the sensor x axis, then lift by the
/// mount height. Doppler and SNR pass through unchanged.
RadarPoint sensor_to_world(const RadarPoint& p, const SensorPose& pose);
RadarPoint world_to_sensor(const RadarPoint& p, const SensorPose& pose);

}  // namespace fade
