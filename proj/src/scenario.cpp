#include "totlab/scenario.hpp"

#include <iomanip>
#include <sstream>

#include "totlab/error.hpp"

namespace totlab {

namespace {

const char* const kStages[] = {"I", "Па", "Пв", "Пс", "Пд", "III"};

const char* const kSummaries[] = {
    "word node localized; reference vectors found in metamemory",
    "companion parts (semantic, episodic) retrieved",
    "same semantic cue repeated; every series exhausted",
    "free recall on the same selected network",
    "new cue: network re-localized and tested with a near-exact input",
    "output matches the reference; recall stops",
};

enum StageRow { kRowI, kRowA, kRowB, kRowC, kRowD, kRowIII };

StageRow row_for_phase(const Phase& phase) {
  if (std::holds_alternative<Persist>(phase)) return kRowB;
  if (std::holds_alternative<FreeRecall>(phase)) return kRowC;
  return kRowD;
}

}  // namespace

ChekhovConfig chekhov_config() {
  const BipolarVector semantic{1, 1, -1, 1, -1, -1, 1, -1, 1};
  const BipolarVector episodic{-1, 1, 1, -1, 1, -1, -1, 1, 1};
  const BipolarVector phonological{1, -1, -1, 1, 1, -1, 1, 1, -1};
  // Unrelated to the phonological pattern (not equal to it or its negation).
  const BipolarVector decoy_pattern{-1, -1, 1, 1, -1, 1, 1, -1, -1};

  ChekhovConfig cfg;
  EpisodeConfig& ep = cfg.episode;
  ep.node.id = "exciseman-surname";
  ep.node.parts.emplace("semantic", WordPart{train_hebbian(semantic), semantic});
  ep.node.parts.emplace("episodic", WordPart{train_hebbian(episodic), episodic});
  ep.node.parts.emplace("phonological", WordPart{train_hebbian(phonological), phonological});
  ep.meta.references = {{"semantic", semantic}, {"episodic", episodic}, {"phonological", phonological}};
  ep.target = "phonological";
  ep.initial_error.mislocalize = {"phonological"};
  ep.initial_error.decoys.emplace("phonological", train_hebbian(decoy_pattern));

  ep.series.limit = 20;
  ep.series.cue = {0, NoiseModel::replacement};
  ep.series.tie = TieRule::retain_input;
  // d = 6/9 is the grid point nearest the 0.7 distortion of the reference
  // cueing example.
  ep.strategy.schedule = {
      Persist{{6, NoiseModel::replacement}, 3},
      FreeRecall{3},
      Relocalize{{}, {1, NoiseModel::replacement}, 1},
  };
  ep.strategy.give_up_after = 200;
  ep.arms_threshold = 50;
  return cfg;
}

std::vector<NarrativeRow> narrative_map(const EpisodeTrace& trace, const EpisodeConfig& config) {
  std::vector<NarrativeRow> rows;
  for (int r = 0; r < 6; ++r) rows.push_back({kStages[r], kSummaries[r], {}});

  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const Event& e = trace.events[i];
    switch (e.type) {
      case EventType::localized_stage:
        rows[kRowI].events.push_back(i);
        break;
      case EventType::part_retrieved:
      case EventType::part_unretrieved:
        rows[kRowA].events.push_back(i);
        break;
      case EventType::resolved:
      case EventType::throw_up_arms:
        rows[kRowIII].events.push_back(i);
        break;
      default:
        if (e.phase_index >= 0 &&
            static_cast<std::size_t>(e.phase_index) < config.strategy.schedule.size()) {
          rows[row_for_phase(config.strategy.schedule[static_cast<std::size_t>(e.phase_index)])]
              .events.push_back(i);
        }
        break;
    }
  }
  return rows;
}

std::string render_narrative(const std::vector<NarrativeRow>& rows, const EpisodeTrace& trace) {
  std::ostringstream out;
  out << "stage  events                                 summary\n";
  for (const auto& row : rows) {
    std::ostringstream ev;
    int failed = 0;
    for (std::size_t idx : row.events) {
      const Event& e = trace.events[idx];
      if (e.type == EventType::attempt_failed) {
        ++failed;
        continue;
      }
      ev << event_name(e.type);
      if (!e.part.empty() && e.type != EventType::localized_stage) ev << '(' << e.part << ')';
      if (e.type == EventType::resolved) ev << '@' << e.attempt_index;
      ev << ' ';
    }
    if (failed > 0) ev << failed << "xAttemptFailed";
    // Cyrillic labels are two bytes per glyph; pad by glyph count.
    std::string label = row.stage;
    const std::size_t glyphs = label == "I" || label == "III" ? label.size() : 2;
    label.append(7 - glyphs, ' ');
    out << label << std::left << std::setw(39) << ev.str() << row.summary << '\n';
  }
  out << "total attempts " << trace.n_attempts << ", localizations " << trace.n_localizations
      << ", total time " << trace.total_time_ms << " ms\n";
  return out.str();
}

void verify_chekhov_signature(const EpisodeTrace& trace, const std::vector<NarrativeRow>& rows) {
  auto fail = [](const std::string& what) {
    throw RuntimeError("Chekhov signature violated: " + what);
  };
  const auto& ev = trace.events;
  if (ev.empty() || ev.front().type != EventType::localized_stage || ev.front().fok != true) {
    fail("episode must open with LocalizedStage(fok=true)");
  }
  for (const char* part : {"semantic", "episodic"}) {
    bool found = false;
    for (const auto& e : ev) {
      if (e.type == EventType::attempt_failed) break;
      if (e.type == EventType::part_retrieved && e.part == part) found = true;
    }
    if (!found) fail(std::string("companion part '") + part + "' not retrieved before target attempts");
  }
  const auto exhausted = trace.find(EventType::series_exhausted);
  if (!exhausted) fail("no SeriesExhausted");
  if (*exhausted + 1 >= ev.size() || ev[*exhausted + 1].type != EventType::fok_felt) {
    fail("FOKFelt must immediately follow the first SeriesExhausted");
  }
  const auto reloc = trace.find(EventType::relocalized);
  if (!reloc) fail("no Relocalized");
  if (*reloc < *exhausted + 1) fail("Relocalized precedes FOKFelt");
  const auto resolved = trace.find(EventType::resolved);
  if (!resolved || *resolved < *reloc) fail("no Resolved after Relocalized");
  if (trace.count(EventType::resolved) != 1) fail("exactly one Resolved expected");
  if (ev[*resolved].attempt_index != ev[*reloc].attempt_index + 1) {
    fail("Resolved must come on the first attempt after Relocalized");
  }
  const auto arms = trace.find(EventType::throw_up_arms);
  if (!arms || *arms < *resolved) fail("no ThrowUpArms after Resolved");

  if (rows.size() != 6) fail("narrative map must have six rows");
  std::size_t last = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].stage != kStages[r]) fail("narrative rows out of order");
    if (rows[r].events.empty()) fail("narrative row " + rows[r].stage + " has no events");
    if (rows[r].events.front() < last) fail("narrative row " + rows[r].stage + " out of order");
    last = rows[r].events.front();
  }
}

ChekhovRun run_chekhov(const ChekhovConfig& config, std::uint64_t seed) {
  Rng rng = make_stream(seed, 0);
  ChekhovRun run;
  run.trace = run_episode(config.episode, rng);
  run.narrative = narrative_map(run.trace, config.episode);
  verify_chekhov_signature(run.trace, run.narrative);
  return run;
}

ChekhovRun run_chekhov(std::uint64_t seed) { return run_chekhov(chekhov_config(), seed); }

}  // namespace totlab
