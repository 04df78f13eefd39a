#include "fade/events.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "fade/frame_io.hpp"

namespace fade {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const std::exception& e) {
      throw MalformedRecord("line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
}

template <typename T, typename Parse>
std::vector<T> read_file(const std::filesystem::path& path, Parse&& parse) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return parse(in);
  } catch (const MalformedRecord& e) {
    throw MalformedRecord(path.string() + ": " + e.what(), e.line());
  }
}

template <typename T, typename Write>
void write_file(const std::filesystem::path& path, const std::vector<T>& events, Write&& write) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write(out, events);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::vector<TruthEvent> parse_truth_events(std::istream& in) {
  std::vector<TruthEvent> out;
  for_each_record(in, [&](const json& r) {
    TruthEvent ev;
    ev.actor = r.at("actor").get<int>();
    const auto kind = r.at("kind").get<std::string>();
    if (kind == "fall") {
      ev.kind = ActivityKind::Fall;
    } else if (kind == "adl") {
      ev.kind = ActivityKind::Adl;
    } else {
      throw std::invalid_argument("unknown kind '" + kind + "'");
    }
    ev.fall_start_t = r.at("fall_start_t").get<double>();
    ev.impact_t = r.at("impact_t").get<double>();
    out.push_back(ev);
  });
  return out;
}

std::vector<TruthEvent> read_truth_events(const std::filesystem::path& path) {
  return read_file<TruthEvent>(path, [](std::istream& in) { return parse_truth_events(in); });
}

void write_truth_events(std::ostream& out, const std::vector<TruthEvent>& events) {
  for (const auto& ev : events) {
    ordered_json r;
    r["actor"] = ev.actor;
    r["kind"] = ev.kind == ActivityKind::Fall ? "fall" : "adl";
    r["fall_start_t"] = ev.fall_start_t;
    r["impact_t"] = ev.impact_t;
    out << r.dump() << '\n';
  }
}

void write_truth_events(const std::filesystem::path& path, const std::vector<TruthEvent>& events) {
  write_file(path, events, [](std::ostream& o, const auto& e) { write_truth_events(o, e); });
}

std::vector<FallEvent> parse_fall_events(std::istream& in) {
  std::vector<FallEvent> out;
  for_each_record(in, [&](const json& r) {
    FallEvent ev;
    ev.track_id = r.at("track").get<std::int64_t>();
    ev.t = r.at("t").get<double>();
    ev.peak_v = r.value("peak_v", 0.0);
    ev.peak_a = r.value("peak_a", 0.0);
    ev.peak_p_ca = r.value("peak_p_ca", 0.0);
    out.push_back(ev);
  });
  return out;
}

std::vector<FallEvent> read_fall_events(const std::filesystem::path& path) {
  return read_file<FallEvent>(path, [](std::istream& in) { return parse_fall_events(in); });
}

void write_fall_events(std::ostream& out, const std::vector<FallEvent>& events) {
  for (const auto& ev : events) {
    ordered_json r;
    r["track"] = ev.track_id;
    r["t"] = ev.t;
    r["peak_v"] = ev.peak_v;
    r["peak_a"] = ev.peak_a;
    r["peak_p_ca"] = ev.peak_p_ca;
    out << r.dump() << '\n';
  }
}

void write_fall_events(const std::filesystem::path& path, const std::vector<FallEvent>& events) {
  write_file(path, events, [](std::ostream& o, const auto& e) { write_fall_events(o, e); });
}

}  // namespace fade
