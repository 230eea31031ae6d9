#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "totlab/curvelab.hpp"
#include "totlab/netcore.hpp"
#include "totlab/rng.hpp"

namespace totlab {

/// One component network of a word node and the pattern it was trained on.
struct WordPart {
  SynapticMatrix net;
  BipolarVector pattern;
};

/// A word as a cluster of component networks ("semantic", "episodic",
/// "phonological", ...). All parts share one network size.
struct WordNode {
  std::string id;
  std::map<std::string, WordPart> parts;

  int n() const;
  void validate() const;
};

/// Reference (etalon) vectors per part, used for stage-III verification.
struct MetaMemory {
  std::map<std::string, BipolarVector> references;
};

/// Parts bound to a wrong network at localization, and the wrong networks.
struct LocalizationError {
  std::set<std::string> mislocalize;
  std::map<std::string, SynapticMatrix> decoys;
};

struct Localization {
  std::map<std::string, SynapticMatrix> selected;
  std::set<std::string> mislocalized;
  bool fok = false;
};

Localization localize(const WordNode& node, const MetaMemory& meta, const std::string& target,
                      const LocalizationError& error);

/// Verification vector for a part: its metamemory reference if present,
/// otherwise the pattern stored in the word node.
const BipolarVector& reference_for(const WordNode& node, const MetaMemory& meta,
                                   const std::string& part);

/// Stage II + III once: draw a cue around `reference`, decode, compare.
bool attempt(const SynapticMatrix& net, const BipolarVector& reference, const CueSpec& cue,
             TieRule tie, Rng& rng);

struct SeriesConfig {
  int limit = 20;
  CueSpec cue;
  TieRule tie = TieRule::retain_input;
};

struct SeriesOutcome {
  bool resolved = false;
  int attempts_used = 0;
};

/// Repeats attempt() on the part's selected network up to cfg.limit times,
/// stopping at the first match. `on_attempt(success)` sees every attempt.
SeriesOutcome run_series(const Localization& loc, const std::string& part,
                         const BipolarVector& reference, const SeriesConfig& cfg, Rng& rng,
                         const std::function<void(bool)>& on_attempt = {});

/// Keep cueing with the same cue.
struct Persist {
  CueSpec cue;
  int series = 1;
};
/// Cue carries no information: every unit is noise.
struct FreeRecall {
  int series = 1;
};
/// Repeat from stage I with a corrected error set and a new cue.
struct Relocalize {
  std::set<std::string> mislocalize;
  CueSpec cue;
  int series = 1;
};
using Phase = std::variant<Persist, FreeRecall, Relocalize>;

std::string phase_name(const Phase& phase);

struct Strategy {
  std::vector<Phase> schedule;
  int give_up_after = 1000;
};

/// Durations in milliseconds.
struct TimingModel {
  double t_localize = 300.0;
  double t_attempt = 40.0;
  double t_decision = 60.0;
  double t_pulse = 20.0;

  double per_attempt() const { return t_pulse + t_attempt + t_decision; }
};

enum class EventType {
  localized_stage,
  part_retrieved,
  part_unretrieved,
  attempt_failed,
  series_exhausted,
  fok_felt,
  relocalized,
  resolved,
  throw_up_arms,
  gave_up,
};

std::string event_name(EventType type);
std::optional<EventType> event_from_name(const std::string& name);

/// phase_index is -1 before the schedule starts. attempt_index counts
/// target-part attempts from 1; it is the index of the attempt the event
/// refers to, or the number made so far for events without one.
struct Event {
  EventType type{};
  double t_ms = 0.0;
  int phase_index = -1;
  int attempt_index = 0;
  std::string part;
  std::optional<bool> fok;

  bool operator==(const Event&) const = default;
};

struct EpisodeTrace {
  std::vector<Event> events;
  std::vector<int> phase_attempts;  // target attempts per schedule phase
  int n_localizations = 0;
  int n_attempts = 0;  // every decode, companions included
  double total_time_ms = 0.0;

  bool resolved() const;
  bool gave_up() const;
  int count(EventType type) const;
  /// Position of the first event of `type`, if any.
  std::optional<std::size_t> find(EventType type, std::size_t from = 0) const;
};

inline double expected_total_time(const EpisodeTrace& trace, const TimingModel& timing) {
  return trace.n_localizations * timing.t_localize + trace.n_attempts * timing.per_attempt();
}

struct EpisodeConfig {
  WordNode node;
  MetaMemory meta;
  std::string target;
  LocalizationError initial_error;
  Strategy strategy;
  SeriesConfig series;  // limit, tie rule, and the companion-part cue
  TimingModel timing;
  int arms_threshold = 50;

  void validate() const;
};

/// Runs stage I, retrieves the companion parts once, then walks the phase
/// schedule on the target part until it resolves or the budget runs out.
EpisodeTrace run_episode(const EpisodeConfig& config, Rng& rng);

}  // namespace totlab
