#include "doctest.h"

#include <filesystem>

#include "generators.hpp"
#include "totlab/error.hpp"
#include "totlab/io.hpp"
#include "totlab/scenario.hpp"

using namespace totlab;
using io::json;

namespace {

const std::filesystem::path kData = TOTLAB_DATA_DIR;

}  // namespace

TEST_CASE("vector and matrix JSON round-trip") {
  gen::Engine e(1);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(e() % 10);
    const auto v = gen::bipolar(e, n);
    const json jv = io::to_json(v);
    CHECK(jv["components"][0].is_number_integer());
    CHECK(io::bipolar_from_json(json::parse(jv.dump())) == v);

    const auto w = apply_damage(gen::trained_net(e, n), gen::any_damage(e, n));
    const auto back = io::matrix_from_json(json::parse(io::to_json(w).dump()));
    CHECK(back.weights() == w.weights());
    CHECK(back.severed() == w.severed());
    CHECK(back.dead_inputs() == w.dead_inputs());

    const auto d = gen::any_damage(e, n);
    CHECK(io::damage_from_json(io::to_json(d)) == d);
  }
}

TEST_CASE("curve CSV round-trip") {
  const auto x = BipolarVector::alternating(9);
  const auto curve = recall_curve(train_hebbian(x), x);
  const std::string csv = io::curve_to_csv(curve);
  CHECK(csv.rfind("m,d,prob_num,prob_den,prob\n", 0) == 0);
  CHECK(csv.find("\n5,0.555556,31,32,") != std::string::npos);
  CHECK(csv.find("\n9,1.000000,1,2,0.5\n") != std::string::npos);
  CHECK(io::curve_from_csv(csv) == curve);
  CHECK_THROWS_AS(io::curve_from_csv("m,d\n0,0\n"), ConfigError);
}

TEST_CASE("report JSON round-trip") {
  const auto w = io::matrix_from_json(io::read_json_file(kData / "demo_tot.json"));
  const auto report = damage_ensemble_dead(w, BipolarVector::alternating(9), 4);
  const json j = io::to_json(report);
  const auto back = io::report_from_json(json::parse(j.dump()));
  CHECK(back.ensemble_size == report.ensemble_size);
  CHECK(back.tot_probability == report.tot_probability);
  CHECK(back.tot_strength == report.tot_strength);
  REQUIRE(back.classes.size() == report.classes.size());
  for (std::size_t c = 0; c < back.classes.size(); ++c) {
    CHECK(back.classes[c].representative == report.classes[c].representative);
    CHECK(back.classes[c].members == report.classes[c].members);
    CHECK(back.classes[c].probability == report.classes[c].probability);
    CHECK(back.classes[c].origin_drop == report.classes[c].origin_drop);
  }
  CHECK(io::to_json(back) == j);
}

TEST_CASE("trace JSON round-trip") {
  const auto cfg = chekhov_config();
  const auto run = run_chekhov(3);
  const json j = io::to_json(run.trace, cfg.episode.timing);
  const auto back = io::trace_from_json(json::parse(j.dump()));
  CHECK(back.events == run.trace.events);
  CHECK(back.phase_attempts == run.trace.phase_attempts);
  CHECK(back.n_attempts == run.trace.n_attempts);
  CHECK(back.n_localizations == run.trace.n_localizations);
  CHECK(back.total_time_ms == run.trace.total_time_ms);
  CHECK(j["outcome"] == "resolved");
  for (const auto& ev : j["events"]) {
    CHECK(ev.contains("type"));
    CHECK(ev.contains("t_ms"));
    CHECK(ev.contains("phase_index"));
    CHECK(ev.contains("attempt_index"));
  }
}

TEST_CASE("episode config files") {
  const auto ok = io::episode_from_json(io::read_json_file(kData / "episode_success.json"));
  CHECK_NOTHROW(ok.validate());
  const auto gaveup = io::episode_from_json(io::read_json_file(kData / "episode_gaveup.json"));
  CHECK(gaveup.initial_error.mislocalize.size() == 1);
  Rng rng = make_stream(0, 0);
  CHECK(run_episode(gaveup, rng).gave_up());
}

TEST_CASE("malformed inputs") {
  CHECK_THROWS_AS(io::read_json_file(kData / "does_not_exist.json"), ConfigError);
  CHECK_THROWS_AS(io::bipolar_from_json(json::parse(R"({"components": [1, 0]})")), ConfigError);
  CHECK_THROWS_AS(io::bipolar_from_json(json::parse(R"({"components": "x"})")), ConfigError);
  CHECK_THROWS_AS(io::bipolar_from_json(json::parse(R"({})")), ConfigError);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"n": 2, "weights": [[1, 1]]})")), ConfigError);
  CHECK_THROWS_AS(io::damage_from_json(json::parse(R"({"severed_links": [[0]]})")), ConfigError);
  CHECK_THROWS_AS(io::noise_from_name("gaussian"), ConfigError);
  CHECK_THROWS_AS(io::tie_from_name("coin"), ConfigError);
  CHECK_THROWS_AS(io::episode_from_json(json::parse(R"({"target": "x"})")), ConfigError);
  CHECK_THROWS_AS(io::trace_from_json(json::parse(R"({"events": [{"type": "Nope"}]})")), ConfigError);
}
