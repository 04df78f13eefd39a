#include <doctest.h>

#include "fade/config.hpp"
#include "support.hpp"

using namespace fade;

TEST_SUITE("config") {

TEST_CASE("defaults survive an empty config") {
  const auto c = parse_config("{}");
  CHECK(c.clustering.cell_size == 0.25);
  CHECK(c.tracker.m_confirm == 3);
  CHECK(c.imm.transition(1, 0) == 0.01);
  CHECK(c.detector.window == 20);
}

TEST_CASE("nested and dotted keys") {
  const auto c = parse_config(R"({"tracker": {"v_max": 3.5, "n_window": 5}, "detector.p_thre": 0.6,
                                  "imm": {"gamma_matrix": [[0.9, 0.1], [0.2, 0.8]], "q_ca": [1e-4, 1e-2, 2.0],
                                          "q_cv": [[1,0,0],[0,2,0],[0,0,0]], "mu_init": [0.8, 0.2]},
                                  "clustering.thre_final": 12})");
  CHECK(c.tracker.v_max == 3.5);
  CHECK(c.tracker.n_window == 5);
  CHECK(c.detector.p_thre == 0.6);
  CHECK(c.imm.switch_threshold == 0.6);
  CHECK(c.imm.transition(1, 1) == 0.8);
  CHECK(c.imm.q_ca(2, 2) == 2.0);
  CHECK(c.imm.q_ca(0, 1) == 0.0);
  CHECK(c.imm.q_cv(1, 1) == 2.0);
  CHECK(c.imm.mu_init(0) == 0.8);
  CHECK(c.clustering.thre_final == 12);
}

TEST_CASE("unknown keys and bad values are errors") {
  CHECK_THROWS_AS(parse_config(R"({"tracker": {"vmax": 3}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"speed": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"detector": {"window": -1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"detector": {"window": 2.5}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"tracker": {"v_max": "fast"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"imm": {"gamma_matrix": [[0.9, 0.2], [0.1, 0.9]]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"tracker": {"m_confirm": 5}})"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  try {
    parse_config(R"({"tracker": {"vmax": 3}})");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("tracker.vmax") != std::string::npos);
  }
}

TEST_CASE("serialized config parses back to the same values") {
  PipelineConfig c;
  c.tracker.process_noise = 7.5;
  c.imm.q_ca(2, 2) = 3.0;
  c.detector.refractory = 1.5;
  const auto back = parse_config(config_to_json(c));
  CHECK(back.tracker.process_noise == 7.5);
  CHECK(back.imm.q_ca(2, 2) == 3.0);
  CHECK(back.detector.refractory == 1.5);
  CHECK(config_to_json(back) == config_to_json(c));
}

TEST_CASE("stream binding sets the frame period") {
  PipelineConfig c;
  c.detector.p_thre = 0.7;
  c.bind_stream({0.1, {}});
  CHECK(c.tracker.t_s == 0.1);
  CHECK(c.imm.t == 0.1);
  CHECK(c.imm.switch_threshold == 0.7);
}

TEST_CASE("missing config file") {
  CHECK_THROWS_AS(read_config("/nonexistent/config.json"), ConfigError);
}

}  // TEST_SUITE
