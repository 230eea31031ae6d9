#include "doctest.h"

#include "totlab/error.hpp"
#include "totlab/io.hpp"
#include "totlab/scenario.hpp"

using namespace totlab;

TEST_CASE("shipped configuration") {
  const auto cfg = chekhov_config();
  const auto& ep = cfg.episode;
  CHECK(ep.node.parts.size() == 3);
  CHECK(ep.target == "phonological");
  CHECK(ep.initial_error.mislocalize == std::set<std::string>{"phonological"});
  CHECK(ep.meta.references.size() == 3);
  REQUIRE(ep.strategy.schedule.size() == 3);
  CHECK(std::holds_alternative<Persist>(ep.strategy.schedule[0]));
  CHECK(std::holds_alternative<FreeRecall>(ep.strategy.schedule[1]));
  const auto& reloc = std::get<Relocalize>(ep.strategy.schedule[2]);
  CHECK(reloc.cue.m == 1);
  CHECK(reloc.mislocalize.empty());

  Rng rng = make_stream(0, 0);
  const auto loc = localize(ep.node, ep.meta, ep.target, ep.initial_error);
  CHECK(loc.fok);
  const auto& semantic = ep.meta.references.at("semantic");
  CHECK(attempt(loc.selected.at("semantic"), semantic, ep.series.cue, ep.series.tie, rng));
  const auto& phon = ep.meta.references.at("phonological");
  for (int t = 0; t < 100; ++t) {
    CHECK_FALSE(attempt(loc.selected.at("phonological"), phon, {static_cast<int>(t % 10)},
                        ep.series.tie, rng));
  }
  const auto fixed = localize(ep.node, ep.meta, ep.target, {});
  for (int t = 0; t < 100; ++t) CHECK(attempt(fixed.selected.at("phonological"), phon, {1}, ep.series.tie, rng));
}

TEST_CASE("signature holds for many seeds") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto run = run_chekhov(seed);
    const auto& t = run.trace;
    const auto reloc = *t.find(EventType::relocalized);
    const auto resolved = *t.find(EventType::resolved);
    CHECK(t.events[resolved].attempt_index == t.events[reloc].attempt_index + 1);
    CHECK(t.count(EventType::throw_up_arms) == 1);
    CHECK(t.count(EventType::resolved) == 1);
    CHECK(*t.find(EventType::fok_felt) < reloc);
    for (std::size_t i = 0; i < reloc; ++i) CHECK(t.events[i].type != EventType::resolved);
    CHECK(t.phase_attempts == std::vector<int>{60, 60, 1});
    CHECK(t.total_time_ms == expected_total_time(t, chekhov_config().episode.timing));
  }
}

TEST_CASE("narrative rows") {
  const auto run = run_chekhov(0);
  const char* labels[] = {"I", "Па", "Пв", "Пс", "Пд", "III"};
  REQUIRE(run.narrative.size() == 6);
  for (std::size_t r = 0; r < 6; ++r) {
    CHECK(run.narrative[r].stage == labels[r]);
    CHECK_FALSE(run.narrative[r].events.empty());
  }
  const std::string table = render_narrative(run.narrative, run.trace);
  CHECK(table.find("ThrowUpArms") != std::string::npos);
  CHECK(table.find("Пд") != std::string::npos);
}

TEST_CASE("tampered traces fail verification") {
  const auto run = run_chekhov(0);
  SUBCASE("missing ThrowUpArms") {
    auto t = run.trace;
    t.events.pop_back();
    CHECK_THROWS_AS(verify_chekhov_signature(t, run.narrative), RuntimeError);
  }
  SUBCASE("FOK moved away") {
    auto t = run.trace;
    const auto fok = *t.find(EventType::fok_felt);
    t.events[fok].type = EventType::attempt_failed;
    CHECK_THROWS_AS(verify_chekhov_signature(t, run.narrative), RuntimeError);
  }
  SUBCASE("no FOK at localization") {
    auto t = run.trace;
    t.events.front().fok = false;
    CHECK_THROWS_AS(verify_chekhov_signature(t, run.narrative), RuntimeError);
  }
  SUBCASE("late resolution") {
    auto t = run.trace;
    t.events[*t.find(EventType::resolved)].attempt_index += 1;
    CHECK_THROWS_AS(verify_chekhov_signature(t, run.narrative), RuntimeError);
  }
  SUBCASE("a row without events") {
    auto rows = run.narrative;
    rows[3].events.clear();
    CHECK_THROWS_AS(verify_chekhov_signature(run.trace, rows), RuntimeError);
  }
  SUBCASE("a schedule without relocalization cannot pass") {
    auto cfg = chekhov_config();
    cfg.episode.strategy.schedule.pop_back();
    CHECK_THROWS_AS(run_chekhov(cfg, 0), RuntimeError);
  }
}

TEST_CASE("runs are byte-identical") {
  const auto timing = chekhov_config().episode.timing;
  const auto a = run_chekhov(0);
  const auto b = run_chekhov(0);
  CHECK(io::to_json(a.trace, timing).dump(2) == io::to_json(b.trace, timing).dump(2));
  CHECK(render_narrative(a.narrative, a.trace) == render_narrative(b.narrative, b.trace));
}
