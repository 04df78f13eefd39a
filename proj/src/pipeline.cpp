#include "fade/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include "fade/clustering.hpp"

namespace fade {

namespace {

PipelineConfig bound(PipelineConfig cfg, const StreamHeader& header) {
  cfg.bind_stream(header);
  cfg.validate();
  return cfg;
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& w) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  w(out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

Pipeline::Pipeline(PipelineConfig cfg, const StreamHeader& header)
    : cfg_(bound(std::move(cfg), header)), header_(header), tracker_(cfg_.tracker), detector_(cfg_.imm, cfg_.detector) {}

std::vector<FallEvent> Pipeline::step(const PointFrame& world, std::size_t* clusters, std::vector<FeatureRow>* trace) {
  std::vector<Centroid> centroids;
  if (!world.points.empty()) {
    const auto found = cluster_frame(world, cfg_.clustering);
    centroids.reserve(found.size());
    for (const auto& c : found) centroids.push_back(c.centroid);
    if (clusters) *clusters = found.size();
  }
  const TrackerStep ts = tracker_.step(world.t, centroids);
  return detector_.process(world.t, ts, trace);
}

std::vector<FallEvent> Pipeline::process(const PointFrame& frame, FrameTiming* timing, std::vector<FeatureRow>* trace) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<FallEvent> events;

  if (last_index_) {
    for (std::int64_t k = *last_index_ + 1; k < frame.frame_index; ++k) {
      PointFrame gap;
      gap.frame_index = k;
      gap.t = frame.t - static_cast<double>(frame.frame_index - k) * header_.t_frame;
      auto ev = step(gap, nullptr, trace);
      events.insert(events.end(), ev.begin(), ev.end());
    }
  }
  last_index_ = frame.frame_index;

  PointFrame world;
  world.frame_index = frame.frame_index;
  world.t = frame.t;
  world.points.reserve(frame.points.size());
  for (const auto& p : frame.points) world.points.push_back(sensor_to_world(p, header_.pose));

  std::size_t clusters = 0;
  auto ev = step(world, &clusters, trace);
  events.insert(events.end(), ev.begin(), ev.end());

  if (timing) {
    timing->frame_index = frame.frame_index;
    timing->t = frame.t;
    timing->points = frame.points.size();
    timing->clusters = clusters;
    timing->tracks = detector_.active_tracks();
    timing->ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return events;
}

PipelineResult run_pipeline(const FrameStream& stream, const PipelineConfig& cfg, bool keep_features) {
  Pipeline pipe(cfg, stream.header);
  PipelineResult out;
  out.timing.reserve(stream.frames.size());
  for (const auto& frame : stream.frames) {
    FrameTiming ft;
    auto ev = pipe.process(frame, &ft, keep_features ? &out.features : nullptr);
    out.events.insert(out.events.end(), ev.begin(), ev.end());
    out.timing.push_back(ft);
  }
  return out;
}

PipelineResult run_pipeline(const std::filesystem::path& frames, const std::filesystem::path& config) {
  const PipelineConfig cfg = read_config(config);
  return run_pipeline(read_frame_stream(frames), cfg);
}

void write_features_csv(std::ostream& out, const std::vector<FeatureRow>& rows) {
  out << "t,track_id,z_meas,z_hat,v_hat,a_hat,mu_ca,decision\n";
  out.precision(9);
  for (const auto& r : rows) {
    out << r.t << ',' << r.track_id << ',';
    if (r.z_meas) out << *r.z_meas;
    out << ',' << r.z_hat << ',' << r.v_hat << ',' << r.a_hat << ',' << r.mu_ca << ',' << (r.decision ? 1 : 0)
        << '\n';
  }
}

void write_features_csv(const std::filesystem::path& path, const std::vector<FeatureRow>& rows) {
  write_file(path, [&](std::ostream& o) { write_features_csv(o, rows); });
}

void write_timing_csv(std::ostream& out, const std::vector<FrameTiming>& rows) {
  out << "frame_index,t,points,clusters,tracks,ms\n";
  out.precision(9);
  for (const auto& r : rows) {
    out << r.frame_index << ',' << r.t << ',' << r.points << ',' << r.clusters << ',' << r.tracks << ',' << r.ms
        << '\n';
  }
}

void write_timing_csv(const std::filesystem::path& path, const std::vector<FrameTiming>& rows) {
  write_file(path, [&](std::ostream& o) { write_timing_csv(o, rows); });
}

}  // namespace fade
