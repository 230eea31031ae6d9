#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "totlab/retrieval.hpp"

namespace totlab {

/// The "Horse Name" episode: intact networks, a phonological part bound to
/// an unrelated decoy at first, persistent cueing, free recall, and a final
/// re-localization with a near-exact cue.
struct ChekhovConfig {
  EpisodeConfig episode;
  std::uint64_t seed = 0;
};

ChekhovConfig chekhov_config();

/// One row of the stage table: I, Па, Пв, Пс, Пд, III.
struct NarrativeRow {
  std::string stage;
  std::string summary;
  std::vector<std::size_t> events;  // indices into the trace
};

/// Assigns trace events to stage rows by phase kind. Rows with no events
/// are still listed.
std::vector<NarrativeRow> narrative_map(const EpisodeTrace& trace, const EpisodeConfig& config);

std::string render_narrative(const std::vector<NarrativeRow>& rows, const EpisodeTrace& trace);

/// Throws RuntimeError naming the first missing element of the expected
/// event signature.
void verify_chekhov_signature(const EpisodeTrace& trace, const std::vector<NarrativeRow>& rows);

struct ChekhovRun {
  EpisodeTrace trace;
  std::vector<NarrativeRow> narrative;
};

ChekhovRun run_chekhov(std::uint64_t seed);
ChekhovRun run_chekhov(const ChekhovConfig& config, std::uint64_t seed);

}  // namespace totlab
