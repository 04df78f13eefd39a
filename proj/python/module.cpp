#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "fade/clustering.hpp"
#include "fade/config.hpp"
#include "fade/evaluation.hpp"
#include "fade/events.hpp"
#include "fade/frame_io.hpp"
#include "fade/pipeline.hpp"
#include "fade/simulator.hpp"
#include "fade/tracking.hpp"

namespace py = pybind11;
using namespace fade;

namespace {

using PointArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointFrame to_frame(const PointArray& points, std::int64_t frame_index, double t) {
  if (points.ndim() != 2 || points.shape(1) != 5) {
    throw py::value_error("points must have shape (n, 5): x, y, z, doppler, snr");
  }
  PointFrame f;
  f.frame_index = frame_index;
  f.t = t;
  auto r = points.unchecked<2>();
  f.points.reserve(static_cast<std::size_t>(r.shape(0)));
  for (py::ssize_t k = 0; k < r.shape(0); ++k) f.points.push_back({r(k, 0), r(k, 1), r(k, 2), r(k, 3), r(k, 4)});
  return f;
}

PointArray to_array(const PointFrame& f) {
  PointArray out({static_cast<py::ssize_t>(f.points.size()), py::ssize_t{5}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t k = 0; k < f.points.size(); ++k) {
    const auto& p = f.points[k];
    const auto i = static_cast<py::ssize_t>(k);
    w(i, 0) = p.x;
    w(i, 1) = p.y;
    w(i, 2) = p.z;
    w(i, 3) = p.doppler;
    w(i, 4) = p.snr;
  }
  return out;
}

py::dict event_dict(const FallEvent& e) {
  py::dict d;
  d["track"] = e.track_id;
  d["t"] = e.t;
  d["peak_v"] = e.peak_v;
  d["peak_a"] = e.peak_a;
  d["peak_p_ca"] = e.peak_p_ca;
  return d;
}

py::list event_list(const std::vector<FallEvent>& events) {
  py::list out;
  for (const auto& e : events) out.append(event_dict(e));
  return out;
}

PipelineConfig config_from(const std::optional<std::string>& json_text) {
  return json_text ? parse_config(*json_text) : PipelineConfig{};
}

class PyPipeline {
 public:
  PyPipeline(const std::optional<std::string>& config_json, double t_frame, double height, double tilt)
      : pipe_(config_from(config_json), StreamHeader{t_frame, {height, tilt}}) {}

  py::list process(const PointArray& points, std::int64_t frame_index, double t) {
    return event_list(pipe_.process(to_frame(points, frame_index, t)));
  }

  std::size_t confirmed_tracks() const {
    std::size_t n = 0;
    for (const auto& tr : pipe_.tracker().tracks()) n += tr.status == TrackStatus::Confirmed;
    return n;
  }

 private:
  Pipeline pipe_;
};

}  // namespace

PYBIND11_MODULE(_fade, m) {
  m.doc() = "Radar point-cloud fall detection core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvalidScript>(m, "InvalidScript", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  m.def("gate_threshold", &gate_threshold, py::arg("probability"), py::arg("dof") = 3);

  m.def(
      "cluster",
      [](const PointArray& points) {
        const PointFrame f = to_frame(points, 0, 0.0);
        py::list out;
        for (const auto& c : cluster_frame(f, ClusterConfig{})) {
          py::dict d;
          d["points"] = c.points;
          d["torso"] = c.torso;
          d["centroid"] = py::make_tuple(c.centroid.x, c.centroid.y, c.centroid.z);
          d["mean_doppler"] = c.mean_doppler;
          out.append(d);
        }
        return out;
      },
      py::arg("points"), "Grid clustering and torso extraction on one world-frame point cloud (n x 5).");

  m.def(
      "simulate",
      [](const std::string& scenario_json) {
        const Dataset data = simulate(parse_scenario(scenario_json));
        py::list frames;
        for (const auto& f : data.frames) frames.append(py::make_tuple(f.frame_index, f.t, to_array(f)));
        py::list truth;
        for (const auto& e : data.truth) {
          py::dict d;
          d["actor"] = e.actor;
          d["kind"] = e.kind == ActivityKind::Fall ? "fall" : "adl";
          d["fall_start_t"] = e.fall_start_t;
          d["impact_t"] = e.impact_t;
          truth.append(d);
        }
        py::dict out;
        out["t_frame"] = data.header.t_frame;
        out["height"] = data.header.pose.height;
        out["tilt"] = data.header.pose.tilt;
        out["frames"] = frames;
        out["truth"] = truth;
        return out;
      },
      py::arg("scenario_json"), "Simulates a scenario; frames are (frame_index, t, sensor-frame points).");

  m.def(
      "simulate_files",
      [](const std::filesystem::path& scenario, const std::filesystem::path& frames,
         const std::filesystem::path& truth) { write_dataset(simulate(read_scenario(scenario)), frames, truth); },
      py::arg("scenario"), py::arg("frames"), py::arg("truth"));

  m.def(
      "run_files",
      [](const std::filesystem::path& frames, const std::optional<std::filesystem::path>& config) {
        const FrameStream stream = read_frame_stream(frames);
        const PipelineConfig cfg = config ? read_config(*config) : PipelineConfig{};
        return event_list(run_pipeline(stream, cfg, false).events);
      },
      py::arg("frames"), py::arg("config") = py::none());

  m.def(
      "evaluate_files",
      [](const std::filesystem::path& events, const std::filesystem::path& truth, double tol) {
        const auto t = read_truth_events(truth);
        MetricsReport report;
        const auto match = match_events(read_fall_events(events), t, tol);
        report.overall += match;
        report.by_user_count[actor_count(t)] += match;
        return metrics_to_json(report);
      },
      py::arg("events"), py::arg("truth"), py::arg("tol") = kDefaultMatchTolerance,
      "Returns the metrics report as a JSON string.");

  m.def(
      "metrics",
      [](std::size_t tp, std::size_t fp, std::size_t fn) {
        const Metrics r = metrics(tp, fp, fn);
        py::dict d;
        d["tp"] = r.tp;
        d["fp"] = r.fp;
        d["fn"] = r.fn;
        d["precision"] = r.precision ? py::cast(*r.precision) : py::none();
        d["recall"] = r.recall ? py::cast(*r.recall) : py::none();
        d["f1"] = r.f1 ? py::cast(*r.f1) : py::none();
        return d;
      },
      py::arg("tp"), py::arg("fp"), py::arg("fn"));

  m.def(
      "default_config", [] { return config_to_json(PipelineConfig{}); }, "Default pipeline configuration as JSON.");

  py::class_<PyPipeline>(m, "Pipeline")
      .def(py::init<const std::optional<std::string>&, double, double, double>(), py::arg("config_json") = py::none(),
           py::arg("t_frame") = kDefaultFramePeriod, py::arg("height") = 2.0, py::arg("tilt") = 0.0)
      .def("process", &PyPipeline::process, py::arg("points"), py::arg("frame_index"), py::arg("t"),
           "Feeds one sensor-frame point cloud (n x 5) and returns the fall events it triggered.")
      .def_property_readonly("confirmed_tracks", &PyPipeline::confirmed_tracks);
}
