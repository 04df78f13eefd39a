#include "fade/frame_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace fade {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string at_line(std::size_t line, const std::string& msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

double number_field(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw MalformedRecord(at_line(line, std::string("missing key '") + key + "'"), line);
  if (!it->is_number()) throw MalformedRecord(at_line(line, std::string("key '") + key + "' is not a number"), line);
  double v = it->get<double>();
  if (!std::isfinite(v)) throw MalformedRecord(at_line(line, std::string("key '") + key + "' is not finite"), line);
  return v;
}

bool is_blank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

FrameReader::FrameReader(std::istream& in) : in_(in) {
  std::string line;
  if (!read_line(line)) return;
  json probe;
  try {
    probe = json::parse(line);
  } catch (const json::parse_error& e) {
    throw MalformedRecord(at_line(line_no_, e.what()), line_no_);
  }
  if (probe.is_object() && probe.contains("format")) {
    parse_header(line);
  } else {
    pending_ = std::move(line);
  }
}

bool FrameReader::read_line(std::string& line) {
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!is_blank(line)) return true;
  }
  return false;
}

void FrameReader::parse_header(const std::string& line) {
  json h = json::parse(line);
  if (!h["format"].is_string() || h["format"].get<std::string>() != kFrameFormat) {
    throw MalformedRecord(at_line(line_no_, std::string("unsupported format, expected ") + kFrameFormat), line_no_);
  }
  if (h.contains("t_frame")) {
    header_.t_frame = number_field(h, "t_frame", line_no_);
    if (header_.t_frame <= 0.0) throw MalformedRecord(at_line(line_no_, "t_frame must be positive"), line_no_);
  }
  if (h.contains("pose")) {
    const json& pose = h["pose"];
    if (!pose.is_object()) throw MalformedRecord(at_line(line_no_, "pose must be an object"), line_no_);
    header_.pose.height = number_field(pose, "h", line_no_);
    header_.pose.tilt = number_field(pose, "theta", line_no_);
    if (header_.pose.height <= 0.0) throw MalformedRecord(at_line(line_no_, "pose.h must be positive"), line_no_);
  }
}

PointFrame FrameReader::parse_frame(const std::string& line) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw MalformedRecord(at_line(line_no_, e.what()), line_no_);
  }
  if (!rec.is_object()) throw MalformedRecord(at_line(line_no_, "record is not an object"), line_no_);

  PointFrame frame;
  auto idx = rec.find("frame");
  if (idx == rec.end() || !idx->is_number_integer()) {
    throw MalformedRecord(at_line(line_no_, "missing or non-integer 'frame'"), line_no_);
  }
  frame.frame_index = idx->get<std::int64_t>();
  frame.t = number_field(rec, "t", line_no_);

  auto pts = rec.find("points");
  if (pts == rec.end() || !pts->is_array()) {
    throw MalformedRecord(at_line(line_no_, "missing 'points' array"), line_no_);
  }
  frame.points.reserve(pts->size());
  for (const auto& p : *pts) {
    if (!p.is_object()) throw MalformedRecord(at_line(line_no_, "point is not an object"), line_no_);
    RadarPoint rp{number_field(p, "x", line_no_), number_field(p, "y", line_no_),
                  number_field(p, "z", line_no_), number_field(p, "v", line_no_),
                  number_field(p, "snr", line_no_)};
    if (rp.snr < 0.0) throw MalformedRecord(at_line(line_no_, "negative snr"), line_no_);
    if (!within_radar_limits(rp)) {
      ++rejected_;
      continue;
    }
    frame.points.push_back(rp);
  }

  if (last_index_ && frame.frame_index <= *last_index_) {
    throw NonMonotoneTime(at_line(line_no_, "frame index does not increase"), line_no_);
  }
  if (last_t_ && frame.t <= *last_t_) {
    throw NonMonotoneTime(at_line(line_no_, "timestamp does not increase"), line_no_);
  }
  last_index_ = frame.frame_index;
  last_t_ = frame.t;
  return frame;
}

std::optional<PointFrame> FrameReader::next() {
  std::string line;
  if (pending_) {
    line = std::move(*pending_);
    pending_.reset();
  } else if (!read_line(line)) {
    return std::nullopt;
  }
  return parse_frame(line);
}

FrameStream parse_frame_stream(std::istream& in) {
  FrameReader reader(in);
  FrameStream out;
  while (auto f = reader.next()) out.frames.push_back(std::move(*f));
  out.header = reader.header();
  out.rejected_points = reader.rejected_points();
  return out;
}

FrameStream read_frame_stream(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return parse_frame_stream(in);
  } catch (const MalformedRecord& e) {
    throw MalformedRecord(path.string() + ": " + e.what(), e.line());
  } catch (const NonMonotoneTime& e) {
    throw NonMonotoneTime(path.string() + ": " + e.what(), e.line());
  }
}

void write_frame_stream(std::ostream& out, const StreamHeader& header,
                        const std::vector<PointFrame>& frames) {
  ordered_json h;
  h["format"] = kFrameFormat;
  h["t_frame"] = header.t_frame;
  h["pose"] = ordered_json{{"h", header.pose.height}, {"theta", header.pose.tilt}};
  out << h.dump() << '\n';
  for (const auto& f : frames) {
    ordered_json rec;
    rec["frame"] = f.frame_index;
    rec["t"] = f.t;
    ordered_json pts = ordered_json::array();
    for (const auto& p : f.points) {
      pts.push_back(ordered_json{{"x", p.x}, {"y", p.y}, {"z", p.z}, {"v", p.doppler}, {"snr", p.snr}});
    }
    rec["points"] = std::move(pts);
    out << rec.dump() << '\n';
  }
}

void write_frame_stream(const std::filesystem::path& path, const StreamHeader& header,
                        const std::vector<PointFrame>& frames) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_frame_stream(out, header, frames);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

bool within_radar_limits(const RadarPoint& p) {
  const double range = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
  return range <= kMaxRange && std::abs(p.doppler) <= kMaxSpeed;
}

RadarPoint sensor_to_world(const RadarPoint& p, const SensorPose& pose) {
  const double c = std::cos(pose.tilt);
  const double s = std::sin(pose.tilt);
  RadarPoint w = p;
  w.y = c * p.y + s * p.z;
  w.z = -s * p.y + c * p.z + pose.height;
  return w;
}

RadarPoint world_to_sensor(const RadarPoint& p, const SensorPose& pose) {
  const double c = std::cos(pose.tilt);
  const double s = std::sin(pose.tilt);
  const double dz = p.z - pose.height;
  RadarPoint r = p;
  r.y = c * p.y - s * dz;
  r.z = s * p.y + c * dz;
  return r;
}

}  // namespace fade
