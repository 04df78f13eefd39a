#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fade/config.hpp"
#include "fade/evaluation.hpp"
#include "fade/events.hpp"
#include "fade/frame_io.hpp"
#include "fade/pipeline.hpp"
#include "fade/simulator.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kData = 2;

fade::PipelineConfig load_config(const std::string& path) {
  return path.empty() ? fade::PipelineConfig{} : fade::read_config(path);
}

fade::MetricsReport evaluate(const std::vector<fade::FallEvent>& events, const std::vector<fade::TruthEvent>& truth,
                             double tol) {
  fade::MetricsReport report;
  const auto match = fade::match_events(events, truth, tol);
  report.overall += match;
  report.by_user_count[fade::actor_count(truth)] += match;
  return report;
}

void write_outputs(const fade::PipelineResult& res, const std::string& features, const std::string& timing) {
  if (!features.empty()) fade::write_features_csv(fs::path(features), res.features);
  if (!timing.empty()) fade::write_timing_csv(fs::path(timing), res.timing);
}

std::vector<double> frame_ms(const fade::PipelineResult& res) {
  std::vector<double> ms;
  ms.reserve(res.timing.size());
  for (const auto& t : res.timing) ms.push_back(t.ms);
  return ms;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radar point-cloud fall detection: simulate, run and evaluate"};
  app.require_subcommand(1);

  std::string scenario, out_frames, out_truth, frames, config, out_events, features, timing, events, truth, out_dir;
  double tol = fade::kDefaultMatchTolerance;

  auto* sim = app.add_subcommand("simulate", "Generate a labelled synthetic dataset");
  sim->add_option("--scenario", scenario, "Scenario JSON")->required();
  sim->add_option("--out-frames", out_frames, "Frame stream output (JSONL)")->required();
  sim->add_option("--out-truth", out_truth, "Ground-truth output (JSONL)")->required();

  auto* run = app.add_subcommand("run", "Run the detector over a frame stream");
  run->add_option("--frames", frames, "Frame stream (JSONL)")->required();
  run->add_option("--config", config, "Config JSON (defaults when omitted)");
  run->add_option("--out-events", out_events, "Detected falls (JSONL)")->required();
  run->add_option("--features", features, "Per-frame feature trace (CSV)");
  run->add_option("--timing", timing, "Per-frame timing (CSV)");

  auto* eval = app.add_subcommand("eval", "Score detections against ground truth");
  eval->add_option("--events", events, "Detected falls (JSONL)")->required();
  eval->add_option("--truth", truth, "Ground truth (JSONL)")->required();
  eval->add_option("--tol", tol, "Matching tolerance, s")->check(CLI::NonNegativeNumber);

  auto* all = app.add_subcommand("all", "Simulate, run and evaluate in one go");
  all->add_option("--scenario", scenario, "Scenario JSON")->required();
  all->add_option("--config", config, "Config JSON (defaults when omitted)");
  all->add_option("--tol", tol, "Matching tolerance, s")->check(CLI::NonNegativeNumber);
  all->add_option("--out-dir", out_dir, "Keep frames, truth, events, features and timing here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*sim) {
      const auto data = fade::simulate(fade::read_scenario(scenario));
      fade::write_dataset(data, out_frames, out_truth);
    } else if (*run) {
      const auto cfg = load_config(config);
      const auto res = fade::run_pipeline(fade::read_frame_stream(frames), cfg);
      fade::write_fall_events(fs::path(out_events), res.events);
      write_outputs(res, features, timing);
    } else if (*eval) {
      const auto report = evaluate(fade::read_fall_events(events), fade::read_truth_events(truth), tol);
      std::cout << fade::metrics_to_json(report) << '\n';
    } else if (*all) {
      const auto cfg = load_config(config);
      const auto data = fade::simulate(fade::read_scenario(scenario));
      fade::FrameStream stream{data.header, data.frames, 0};
      const auto res = fade::run_pipeline(stream, cfg, !out_dir.empty());
      auto report = evaluate(res.events, data.truth, tol);
      report.timing = fade::summarize_timing(frame_ms(res));
      if (!out_dir.empty()) {
        const fs::path dir(out_dir);
        fs::create_directories(dir);
        fade::write_dataset(data, dir / "frames.jsonl", dir / "truth.jsonl");
        fade::write_fall_events(dir / "events.jsonl", res.events);
        write_outputs(res, (dir / "features.csv").string(), (dir / "timing.csv").string());
      }
      std::cout << fade::metrics_to_json(report) << '\n';
    }
  } catch (const fade::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const fade::InvalidScript& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kUsage;
  } catch (const fade::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}
