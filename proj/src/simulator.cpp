#include "fade/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fade {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using Eigen::Vector3d;

constexpr double kMaxAdlSpeed = 1.2;  // m/s, vertical speed cap for ADL scripts
constexpr double kMinRest = 1.0;      // s on the floor after impact
constexpr double kEps = 1e-9;

struct Kin {
  Vector3d p = Vector3d::Zero();
  Vector3d v = Vector3d::Zero();
};

struct Segment {
  double t0 = 0.0;
  double t1 = 0.0;
  std::function<Kin(double)> at;
};

struct Plan {
  Kin initial;
  std::vector<Segment> segments;
  std::vector<TruthEvent> events;
};

// Vertical raised-cosine travel: zero speed at both ends, peak speed
// |travel| * pi / (2 * duration) at the midpoint.
Segment vertical_move(double t0, const Vector3d& from, double travel, double peak_speed) {
  const double duration = std::abs(travel) < kEps ? 0.0 : std::numbers::pi * std::abs(travel) / (2.0 * peak_speed);
  Segment s{t0, t0 + duration, {}};
  s.at = [=](double t) {
    Kin k;
    k.p = from;
    if (duration <= 0.0) return k;
    const double w = std::numbers::pi / duration;
    const double tau = t - t0;
    k.p.z() = from.z() + travel * (1.0 - std::cos(w * tau)) / 2.0;
    k.v.z() = travel * w * std::sin(w * tau) / 2.0;
    return k;
  };
  return s;
}

Kin end_state(const Segment& s) {
  Kin k = s.at(s.t1);
  k.v.setZero();
  return k;
}

Plan plan_script(const ActorScript& script) {
  Plan plan;
  plan.initial.p = Vector3d(script.x0, script.y0, script.torso_height);
  if (!(script.torso_height > 0.0)) throw InvalidScript("actor " + std::to_string(script.id) + ": torso_height must be positive");

  Kin cur = plan.initial;
  double free_at = -std::numeric_limits<double>::infinity();
  double rest_until = -std::numeric_limits<double>::infinity();
  const std::string who = "actor " + std::to_string(script.id) + ": ";

  for (const Action& a : script.actions) {
    if (a.start_t < free_at - kEps) throw InvalidScript(who + "overlapping actions at t=" + std::to_string(a.start_t));
    if (a.start_t < rest_until - kEps) throw InvalidScript(who + "rest after a fall must last at least 1 s");

    Segment seg;
    TruthEvent ev{script.id, ActivityKind::Adl, a.start_t, a.start_t};
    switch (a.kind) {
      case ActionKind::Stand: {
        if (a.duration < 0.0) throw InvalidScript(who + "negative stand duration");
        const Kin hold = cur;
        seg = {a.start_t, a.start_t + a.duration, [hold](double) { return Kin{hold.p, Vector3d::Zero()}; }};
        break;
      }
      case ActionKind::Walk: {
        if (!(a.speed > 0.0)) throw InvalidScript(who + "walk speed must be positive");
        const Vector3d from = cur.p;
        const Vector3d to(a.to_x, a.to_y, cur.p.z());
        const double dist = (to - from).norm();
        const double dur = dist / a.speed;
        const Vector3d vel = dist > 0.0 ? Vector3d((to - from) / dur) : Vector3d::Zero();
        const double t0 = a.start_t;
        seg = {t0, t0 + dur, [=](double t) { return Kin{from + vel * (t - t0), vel}; }};
        break;
      }
      case ActionKind::Sit:
      case ActionKind::Squat:
      case ActionKind::StandUp: {
        if (!(a.peak_speed > 0.0 && a.peak_speed <= kMaxAdlSpeed)) {
          throw InvalidScript(who + "ADL vertical speed must lie in (0, 1.2] m/s");
        }
        const double travel = a.kind == ActionKind::StandUp ? script.torso_height - cur.p.z() : -a.drop;
        if (a.kind != ActionKind::StandUp && a.drop < 0.0) throw InvalidScript(who + "negative drop");
        if (cur.p.z() + travel <= 0.0) throw InvalidScript(who + "torso would go below the floor");
        const Segment down = vertical_move(a.start_t, cur.p, travel, a.peak_speed);
        if (a.kind == ActionKind::Squat) {
          if (a.hold < 0.0) throw InvalidScript(who + "negative squat hold");
          const Kin bottom = end_state(down);
          const Segment up = vertical_move(down.t1 + a.hold, bottom.p, a.drop, a.peak_speed);
          seg = {a.start_t, up.t1, [=](double t) {
                   if (t <= down.t1) return down.at(t);
                   if (t < up.t0) return bottom;
                   return up.at(t);
                 }};
        } else {
          seg = down;
        }
        break;
      }
      case ActionKind::Fall: {
        if (!(a.a_fall < 0.0 && -a.a_fall < kGravity)) {
          throw InvalidScript(who + "fall acceleration must satisfy -9.81 < a_fall < 0");
        }
        if (a.pre_fall_duration < 0.0 || a.pre_fall_drop < 0.0) throw InvalidScript(who + "negative pre-fall parameter");
        const Vector3d from = cur.p;
        const double z1 = from.z() - a.pre_fall_drop;
        if (!(z1 > a.rest_height)) throw InvalidScript(who + "fall must start above rest_height");

        const double t_fall = a.start_t + a.pre_fall_duration;
        const double tau_f = std::sqrt(2.0 * (z1 - a.rest_height) / -a.a_fall);
        Vector3d dir(a.dir_x, a.dir_y, 0.0);
        if (dir.norm() > 0.0) dir.normalize();
        const Vector3d v_xy = dir * (a.reach / tau_f);
        const double pre_speed = a.pre_fall_duration > 0.0
                                     ? std::numbers::pi * a.pre_fall_drop / (2.0 * a.pre_fall_duration)
                                     : 1.0;
        const Segment pre = a.pre_fall_drop > 0.0 ? vertical_move(a.start_t, from, -a.pre_fall_drop, pre_speed)
                                                  : Segment{a.start_t, a.start_t, [from](double) { return Kin{from, {}}; }};
        const Vector3d p1(from.x(), from.y(), z1);
        const double acc = a.a_fall;
        seg = {a.start_t, t_fall + tau_f, [=](double t) {
                 if (t < t_fall) return t <= pre.t1 ? pre.at(t) : Kin{p1, Vector3d::Zero()};
                 const double s = t - t_fall;
                 Kin k;
                 k.p = p1 + v_xy * s;
                 k.p.z() = z1 + 0.5 * acc * s * s;
                 k.v = v_xy;
                 k.v.z() = acc * s;
                 return k;
               }};
        ev = {script.id, ActivityKind::Fall, t_fall, t_fall + tau_f};
        rest_until = seg.t1 + kMinRest;
        break;
      }
    }
    if (a.kind != ActionKind::Fall) ev.impact_t = seg.t1;
    plan.events.push_back(ev);
    plan.segments.push_back(seg);
    cur = end_state(seg);
    free_at = seg.t1;
  }
  return plan;
}

Kin state_at(const Plan& plan, double t) {
  const Segment* active = nullptr;
  for (const auto& s : plan.segments) {
    if (s.t0 <= t) active = &s;
  }
  if (!active) return {plan.initial.p, Vector3d::Zero()};
  if (t <= active->t1) return active->at(t);
  return end_state(*active);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t stream, std::uint32_t sub) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream, sub};
  return std::mt19937_64(seq);
}

Vector3d unit_ball(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Vector3d p(u(rng), u(rng), u(rng));
    if (p.squaredNorm() <= 1.0) return p;
  }
}

struct BodyPoint {
  Vector3d p;
  Vector3d v;
  double doppler;
  double snr;
};

RadarPoint as_radar_point(const Vector3d& p, double doppler, double snr) {
  return {p.x(), p.y(), p.z(), doppler, snr};
}

template <typename T>
T json_value(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : it->get<T>();
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw InvalidScript(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, _] : obj.items()) {
    if (!ok.count(k)) throw InvalidScript(where + ": unknown key '" + k + "'");
  }
}

ActionKind kind_from(const std::string& s) {
  if (s == "walk") return ActionKind::Walk;
  if (s == "stand") return ActionKind::Stand;
  if (s == "sit") return ActionKind::Sit;
  if (s == "squat") return ActionKind::Squat;
  if (s == "stand_up") return ActionKind::StandUp;
  if (s == "fall") return ActionKind::Fall;
  throw InvalidScript("unknown action kind '" + s + "'");
}

const char* kind_name(ActionKind k) {
  switch (k) {
    case ActionKind::Walk: return "walk";
    case ActionKind::Stand: return "stand";
    case ActionKind::Sit: return "sit";
    case ActionKind::Squat: return "squat";
    case ActionKind::StandUp: return "stand_up";
    case ActionKind::Fall: return "fall";
  }
  return "stand";
}

}  // namespace

void ActorScript::validate() const { (void)plan_script(*this); }

void NoiseSpec::validate() const {
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(detection_probability) || !prob(ghost_detection_probability)) {
    throw InvalidScript("noise: probabilities must lie in [0, 1]");
  }
  if (position_sigma < 0.0 || doppler_sigma < 0.0 || limb_doppler_sigma < 0.0 || clutter_rate < 0.0) {
    throw InvalidScript("noise: sigmas and clutter rate must be non-negative");
  }
  if (ghost_wall && ghost_wall->normal.norm() == 0.0) throw InvalidScript("noise: ghost wall normal is zero");
}

std::size_t frame_count(double duration, double t_frame) {
  return static_cast<std::size_t>(std::llround(duration / t_frame));
}

double radial_speed(const Vector3d& p, const Vector3d& v, const Vector3d& radar) {
  const Vector3d los = p - radar;
  const double n = los.norm();
  return n > 0.0 ? v.dot(los) / n : 0.0;
}

Vector3d mirror_point(const Vector3d& p, const WallPlane& wall) {
  const Vector3d n = wall.normal.normalized();
  return p - 2.0 * (p - wall.point).dot(n) * n;
}

Vector3d mirror_direction(const Vector3d& v, const WallPlane& wall) {
  const Vector3d n = wall.normal.normalized();
  return v - 2.0 * v.dot(n) * n;
}

ActorTrajectory synth_trajectory(const ActorScript& script, double t_frame, std::size_t n_frames) {
  const Plan plan = plan_script(script);
  ActorTrajectory out;
  out.actor = script.id;
  out.events = plan.events;
  out.samples.reserve(n_frames);
  for (std::size_t k = 0; k < n_frames; ++k) {
    const double t = static_cast<double>(k) * t_frame;
    const Kin s = state_at(plan, t);
    out.samples.push_back({t, s.p, s.v});
  }
  return out;
}

std::vector<PointFrame> synth_pointcloud(const std::vector<ActorTrajectory>& truth, const NoiseSpec& noise,
                                         const SensorPose& pose, std::uint64_t seed, std::size_t n_frames,
                                         double t_frame) {
  noise.validate();
  const Vector3d radar(0.0, 0.0, pose.height);
  const Vector3d torso_axes(0.2, 0.15, 0.3);

  std::vector<std::mt19937_64> body_rng, ghost_rng;
  for (const auto& tr : truth) {
    body_rng.push_back(make_stream(seed, 1, static_cast<std::uint32_t>(tr.actor)));
    ghost_rng.push_back(make_stream(seed, 2, static_cast<std::uint32_t>(tr.actor)));
  }
  auto clutter_rng = make_stream(seed, 3, 0);

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::poisson_distribution<int> clutter_count(noise.clutter_rate > 0.0 ? noise.clutter_rate : 1.0);

  std::vector<PointFrame> frames(n_frames);
  std::vector<BodyPoint> body;
  for (std::size_t k = 0; k < n_frames; ++k) {
    PointFrame& frame = frames[k];
    frame.frame_index = static_cast<std::int64_t>(k);
    frame.t = static_cast<double>(k) * t_frame;
    std::vector<std::pair<Vector3d, std::pair<double, double>>> world;  // position, (doppler, snr)

    for (std::size_t a = 0; a < truth.size(); ++a) {
      auto& rng = body_rng[a];
      const TruthSample& s = truth[a].samples.at(k);
      body.clear();
      for (std::size_t i = 0; i < noise.torso_points; ++i) {
        Vector3d p = s.position + unit_ball(rng).cwiseProduct(torso_axes);
        p += noise.position_sigma * Vector3d(gauss(rng), gauss(rng), gauss(rng));
        const double dop = radial_speed(p, s.velocity, radar) + noise.doppler_sigma * gauss(rng);
        body.push_back({p, s.velocity, dop, 15.0 + 10.0 * unif(rng)});
      }
      for (std::size_t i = 0; i < noise.limb_points; ++i) {
        const double ang = 2.0 * std::numbers::pi * unif(rng);
        const double rad = 0.1 + 0.1 * unif(rng);
        Vector3d p = s.position + Vector3d(rad * std::cos(ang), rad * std::sin(ang), -0.3 + 0.5 * unif(rng));
        p += noise.position_sigma * Vector3d(gauss(rng), gauss(rng), gauss(rng));
        const double dop = radial_speed(p, s.velocity, radar) + noise.limb_doppler_sigma * gauss(rng) +
                           noise.doppler_sigma * gauss(rng);
        body.push_back({p, s.velocity, dop, 8.0 + 7.0 * unif(rng)});
      }
      for (const auto& b : body) {
        if (unif(rng) < noise.detection_probability) world.push_back({b.p, {b.doppler, b.snr}});
      }

      if (noise.ghost_wall) {
        auto& grng = ghost_rng[a];
        for (const auto& b : body) {
          const Vector3d gp = mirror_point(b.p, *noise.ghost_wall);
          const Vector3d gv = mirror_direction(b.v, *noise.ghost_wall);
          const double dop = radial_speed(gp, gv, radar) + (b.doppler - radial_speed(b.p, b.v, radar));
          const double snr = 5.0 + 5.0 * unif(grng);
          if (unif(grng) < noise.ghost_detection_probability) world.push_back({gp, {dop, snr}});
        }
      }
    }

    if (noise.clutter_rate > 0.0) {
      const int n = clutter_count(clutter_rng);
      std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.3, 7.0), uz(0.0, 2.5), uv(-0.3, 0.3);
      for (int i = 0; i < n; ++i) {
        Vector3d p;
        do {
          p = Vector3d(ux(clutter_rng), uy(clutter_rng), uz(clutter_rng));
        } while ((p - radar).norm() > kMaxRange);
        world.push_back({p, {uv(clutter_rng), 5.0 + 8.0 * unif(clutter_rng)}});
      }
    }

    frame.points.reserve(world.size());
    for (const auto& [p, ds] : world) {
      const RadarPoint sp = world_to_sensor(as_radar_point(p, ds.first, ds.second), pose);
      if (within_radar_limits(sp)) frame.points.push_back(sp);
    }
  }
  return frames;
}

Dataset simulate(const Scenario& scenario) {
  if (!(scenario.t_frame > 0.0) || !(scenario.duration >= 0.0)) throw InvalidScript("scenario: bad timing");
  std::set<int> ids;
  for (const auto& a : scenario.actors) {
    if (!ids.insert(a.id).second) throw InvalidScript("scenario: duplicate actor id " + std::to_string(a.id));
  }
  const std::size_t n = frame_count(scenario.duration, scenario.t_frame);

  Dataset data;
  data.header.t_frame = scenario.t_frame;
  data.header.pose = scenario.pose;
  for (const auto& a : scenario.actors) data.trajectories.push_back(synth_trajectory(a, scenario.t_frame, n));
  data.frames = synth_pointcloud(data.trajectories, scenario.noise, scenario.pose, scenario.seed, n, scenario.t_frame);
  for (const auto& tr : data.trajectories) {
    data.truth.insert(data.truth.end(), tr.events.begin(), tr.events.end());
  }
  std::stable_sort(data.truth.begin(), data.truth.end(), [](const TruthEvent& a, const TruthEvent& b) {
    return a.fall_start_t < b.fall_start_t || (a.fall_start_t == b.fall_start_t && a.actor < b.actor);
  });
  return data;
}

void write_dataset(const Dataset& data, const std::filesystem::path& frames_path,
                   const std::filesystem::path& truth_path) {
  write_frame_stream(frames_path, data.header, data.frames);
  write_truth_events(truth_path, data.truth);
}

Scenario parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidScript(std::string("scenario: ") + e.what());
  }
  check_keys(j, {"seed", "duration", "t_frame", "actors", "noise", "pose"}, "scenario");

  Scenario sc;
  try {
    sc.seed = json_value<std::uint64_t>(j, "seed", 0);
    sc.duration = json_value(j, "duration", sc.duration);
    sc.t_frame = json_value(j, "t_frame", sc.t_frame);
    if (j.contains("pose")) {
      check_keys(j["pose"], {"h", "theta"}, "pose");
      sc.pose.height = json_value(j["pose"], "h", sc.pose.height);
      sc.pose.tilt = json_value(j["pose"], "theta", sc.pose.tilt);
    }
    if (j.contains("noise")) {
      const json& n = j["noise"];
      check_keys(n, {"position_sigma", "doppler_sigma", "detection_probability", "clutter_rate", "ghost_wall",
                     "ghost_detection_probability", "torso_points", "limb_points", "limb_doppler_sigma"},
                 "noise");
      NoiseSpec& ns = sc.noise;
      ns.position_sigma = json_value(n, "position_sigma", ns.position_sigma);
      ns.doppler_sigma = json_value(n, "doppler_sigma", ns.doppler_sigma);
      ns.detection_probability = json_value(n, "detection_probability", ns.detection_probability);
      ns.clutter_rate = json_value(n, "clutter_rate", ns.clutter_rate);
      ns.ghost_detection_probability = json_value(n, "ghost_detection_probability", ns.ghost_detection_probability);
      ns.torso_points = json_value(n, "torso_points", ns.torso_points);
      ns.limb_points = json_value(n, "limb_points", ns.limb_points);
      ns.limb_doppler_sigma = json_value(n, "limb_doppler_sigma", ns.limb_doppler_sigma);
      if (n.contains("ghost_wall") && !n["ghost_wall"].is_null()) {
        const json& w = n["ghost_wall"];
        check_keys(w, {"point", "normal"}, "ghost_wall");
        const auto p = w.at("point").get<std::vector<double>>();
        const auto nn = w.at("normal").get<std::vector<double>>();
        if (p.size() != 3 || nn.size() != 3) throw InvalidScript("ghost_wall: point and normal need 3 components");
        ns.ghost_wall = WallPlane{Vector3d(p[0], p[1], p[2]), Vector3d(nn[0], nn[1], nn[2])};
      }
    }
    for (const json& ja : json_value(j, "actors", json::array())) {
      check_keys(ja, {"id", "start", "torso_height", "actions"}, "actor");
      ActorScript a;
      a.id = ja.at("id").get<int>();
      if (ja.contains("start")) {
        const auto st = ja["start"].get<std::vector<double>>();
        if (st.size() != 2) throw InvalidScript("actor start must be [x, y]");
        a.x0 = st[0];
        a.y0 = st[1];
      }
      a.torso_height = json_value(ja, "torso_height", a.torso_height);
      for (const json& jx : json_value(ja, "actions", json::array())) {
        check_keys(jx, {"kind", "start_t", "duration", "to", "speed", "drop", "peak_speed", "hold", "a_fall",
                        "rest_height", "pre_fall_duration", "pre_fall_drop", "direction", "reach"},
                   "action");
        Action x;
        x.kind = kind_from(jx.at("kind").get<std::string>());
        x.start_t = jx.at("start_t").get<double>();
        x.duration = json_value(jx, "duration", x.duration);
        if (jx.contains("to")) {
          const auto to = jx["to"].get<std::vector<double>>();
          if (to.size() != 2) throw InvalidScript("walk target must be [x, y]");
          x.to_x = to[0];
          x.to_y = to[1];
        }
        x.speed = json_value(jx, "speed", x.speed);
        x.drop = json_value(jx, "drop", x.drop);
        x.peak_speed = json_value(jx, "peak_speed", x.peak_speed);
        x.hold = json_value(jx, "hold", x.hold);
        x.a_fall = json_value(jx, "a_fall", x.a_fall);
        x.rest_height = json_value(jx, "rest_height", x.rest_height);
        x.pre_fall_duration = json_value(jx, "pre_fall_duration", x.pre_fall_duration);
        x.pre_fall_drop = json_value(jx, "pre_fall_drop", x.pre_fall_drop);
        if (jx.contains("direction")) {
          const auto d = jx["direction"].get<std::vector<double>>();
          if (d.size() != 2) throw InvalidScript("fall direction must be [x, y]");
          x.dir_x = d[0];
          x.dir_y = d[1];
        }
        x.reach = json_value(jx, "reach", x.reach);
        a.actions.push_back(x);
      }
      sc.actors.push_back(std::move(a));
    }
  } catch (const json::exception& e) {
    throw InvalidScript(std::string("scenario: ") + e.what());
  }
  for (const auto& a : sc.actors) a.validate();
  sc.noise.validate();
  return sc;
}

Scenario read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string scenario_to_json(const Scenario& sc) {
  ordered_json j;
  j["seed"] = sc.seed;
  j["duration"] = sc.duration;
  j["t_frame"] = sc.t_frame;
  j["pose"] = ordered_json{{"h", sc.pose.height}, {"theta", sc.pose.tilt}};
  const NoiseSpec& n = sc.noise;
  ordered_json jn;
  jn["position_sigma"] = n.position_sigma;
  jn["doppler_sigma"] = n.doppler_sigma;
  jn["detection_probability"] = n.detection_probability;
  jn["clutter_rate"] = n.clutter_rate;
  if (n.ghost_wall) {
    const auto& w = *n.ghost_wall;
    jn["ghost_wall"] = ordered_json{{"point", {w.point.x(), w.point.y(), w.point.z()}},
                                    {"normal", {w.normal.x(), w.normal.y(), w.normal.z()}}};
  } else {
    jn["ghost_wall"] = nullptr;
  }
  jn["ghost_detection_probability"] = n.ghost_detection_probability;
  jn["torso_points"] = n.torso_points;
  jn["limb_points"] = n.limb_points;
  jn["limb_doppler_sigma"] = n.limb_doppler_sigma;
  j["noise"] = jn;

  ordered_json actors = ordered_json::array();
  for (const auto& a : sc.actors) {
    ordered_json ja;
    ja["id"] = a.id;
    ja["start"] = {a.x0, a.y0};
    ja["torso_height"] = a.torso_height;
    ordered_json acts = ordered_json::array();
    for (const auto& x : a.actions) {
      ordered_json jx;
      jx["kind"] = kind_name(x.kind);
      jx["start_t"] = x.start_t;
      switch (x.kind) {
        case ActionKind::Stand:
          jx["duration"] = x.duration;
          break;
        case ActionKind::Walk:
          jx["to"] = {x.to_x, x.to_y};
          jx["speed"] = x.speed;
          break;
        case ActionKind::Sit:
        case ActionKind::Squat:
        case ActionKind::StandUp:
          if (x.kind != ActionKind::StandUp) jx["drop"] = x.drop;
          jx["peak_speed"] = x.peak_speed;
          if (x.kind == ActionKind::Squat) jx["hold"] = x.hold;
          break;
        case ActionKind::Fall:
          jx["a_fall"] = x.a_fall;
          jx["rest_height"] = x.rest_height;
          jx["pre_fall_duration"] = x.pre_fall_duration;
          jx["pre_fall_drop"] = x.pre_fall_drop;
          jx["direction"] = {x.dir_x, x.dir_y};
          jx["reach"] = x.reach;
          break;
      }
      acts.push_back(jx);
    }
    ja["actions"] = acts;
    actors.push_back(ja);
  }
  j["actors"] = actors;
  return j.dump(2);
}

}  // namespace fade
