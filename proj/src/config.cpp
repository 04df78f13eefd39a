#include "fade/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

namespace fade {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void flatten(const json& j, const std::string& prefix, std::map<std::string, json>& out) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      flatten(v, key, out);
    } else {
      out[key] = v;
    }
  }
}

Eigen::Matrix3d matrix3(const json& v) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  if (!v.is_array() || v.size() != 3) throw ConfigError("expected 3 diagonal entries or a 3x3 matrix");
  if (v[0].is_array()) {
    for (int i = 0; i < 3; ++i) {
      if (v[i].size() != 3) throw ConfigError("expected a 3x3 matrix");
      for (int k = 0; k < 3; ++k) m(i, k) = v[i][k].get<double>();
    }
  } else {
    for (int i = 0; i < 3; ++i) m(i, i) = v[i].get<double>();
  }
  return m;
}

Eigen::Matrix2d matrix2(const json& v) {
  if (!v.is_array() || v.size() != 2) throw ConfigError("expected a 2x2 matrix");
  Eigen::Matrix2d m;
  for (int i = 0; i < 2; ++i) {
    if (!v[i].is_array() || v[i].size() != 2) throw ConfigError("expected a 2x2 matrix");
    for (int k = 0; k < 2; ++k) m(i, k) = v[i][k].get<double>();
  }
  return m;
}

using Setter = std::function<void(PipelineConfig&, const json&)>;

template <typename T, typename S>
Setter field(T S::*member, S PipelineConfig::*section) {
  return [=](PipelineConfig& c, const json& v) {
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer() || (std::is_unsigned_v<T> && v.get<std::int64_t>() < 0)) {
        throw ConfigError("expected a non-negative integer");
      }
    } else if (!v.is_number()) {
      throw ConfigError("expected a number");
    }
    (c.*section).*member = v.get<T>();
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"clustering.cell_size", field(&ClusterConfig::cell_size, &PipelineConfig::clustering)},
      {"clustering.thre_starter", field(&ClusterConfig::thre_starter, &PipelineConfig::clustering)},
      {"clustering.thre_final", field(&ClusterConfig::thre_final, &PipelineConfig::clustering)},
      {"clustering.beta_gap", field(&ClusterConfig::beta_gap, &PipelineConfig::clustering)},
      {"tracker.v_min", field(&TrackerConfig::v_min, &PipelineConfig::tracker)},
      {"tracker.v_max", field(&TrackerConfig::v_max, &PipelineConfig::tracker)},
      {"tracker.m_confirm", field(&TrackerConfig::m_confirm, &PipelineConfig::tracker)},
      {"tracker.n_window", field(&TrackerConfig::n_window, &PipelineConfig::tracker)},
      {"tracker.m_delete", field(&TrackerConfig::m_delete, &PipelineConfig::tracker)},
      {"tracker.delete_window", field(&TrackerConfig::delete_window, &PipelineConfig::tracker)},
      {"tracker.gate_probability", field(&TrackerConfig::gate_probability, &PipelineConfig::tracker)},
      {"tracker.process_noise", field(&TrackerConfig::process_noise, &PipelineConfig::tracker)},
      {"tracker.measurement_noise", field(&TrackerConfig::measurement_noise, &PipelineConfig::tracker)},
      {"imm.gamma_matrix", [](PipelineConfig& c, const json& v) { c.imm.transition = matrix2(v); }},
      {"imm.q_cv", [](PipelineConfig& c, const json& v) { c.imm.q_cv = matrix3(v); }},
      {"imm.q_ca", [](PipelineConfig& c, const json& v) { c.imm.q_ca = matrix3(v); }},
      {"imm.r", field(&ImmConfig::r, &PipelineConfig::imm)},
      {"imm.u_fit_window", field(&ImmConfig::u_fit_window, &PipelineConfig::imm)},
      {"imm.mu_init",
       [](PipelineConfig& c, const json& v) {
         if (!v.is_array() || v.size() != 2) throw ConfigError("expected two probabilities");
         c.imm.mu_init = Eigen::Vector2d(v[0].get<double>(), v[1].get<double>());
       }},
      {"detector.v_thre", field(&DetectorConfig::v_thre, &PipelineConfig::detector)},
      {"detector.a_thre", field(&DetectorConfig::a_thre, &PipelineConfig::detector)},
      {"detector.p_thre", field(&DetectorConfig::p_thre, &PipelineConfig::detector)},
      {"detector.window", field(&DetectorConfig::window, &PipelineConfig::detector)},
      {"detector.refractory", field(&DetectorConfig::refractory, &PipelineConfig::detector)},
  };
  return table;
}

ordered_json to_json(const Eigen::Matrix3d& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return rows;
}

}  // namespace

void PipelineConfig::bind_stream(const StreamHeader& header) {
  tracker.t_s = header.t_frame;
  imm.t = header.t_frame;
  imm.switch_threshold = detector.p_thre;
}

void PipelineConfig::validate() const {
  try {
    clustering.validate();
    tracker.validate();
    imm.validate();
    detector.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

PipelineConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  std::map<std::string, json> flat;
  flatten(j, "", flat);
  PipelineConfig cfg;
  for (const auto& [key, value] : flat) {
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what());
    } catch (const json::exception& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }
  cfg.imm.switch_threshold = cfg.detector.p_thre;
  cfg.validate();
  return cfg;
}

PipelineConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string config_to_json(const PipelineConfig& c) {
  ordered_json j;
  j["clustering"] = {{"cell_size", c.clustering.cell_size},
                     {"thre_starter", c.clustering.thre_starter},
                     {"thre_final", c.clustering.thre_final},
                     {"beta_gap", c.clustering.beta_gap}};
  j["tracker"] = {{"v_min", c.tracker.v_min},
                  {"v_max", c.tracker.v_max},
                  {"m_confirm", c.tracker.m_confirm},
                  {"n_window", c.tracker.n_window},
                  {"m_delete", c.tracker.m_delete},
                  {"delete_window", c.tracker.delete_window},
                  {"gate_probability", c.tracker.gate_probability},
                  {"process_noise", c.tracker.process_noise},
                  {"measurement_noise", c.tracker.measurement_noise}};
  const auto& g = c.imm.transition;
  j["imm"] = {{"gamma_matrix", {{g(0, 0), g(0, 1)}, {g(1, 0), g(1, 1)}}},
              {"q_cv", to_json(c.imm.q_cv)},
              {"q_ca", to_json(c.imm.q_ca)},
              {"r", c.imm.r},
              {"u_fit_window", c.imm.u_fit_window},
              {"mu_init", {c.imm.mu_init(0), c.imm.mu_init(1)}}};
  j["detector"] = {{"v_thre", c.detector.v_thre},
                   {"a_thre", c.detector.a_thre},
                   {"p_thre", c.detector.p_thre},
                   {"window", c.detector.window},
                   {"refractory", c.detector.refractory}};
  return j.dump(2);
}

}  // namespace fade
