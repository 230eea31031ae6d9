#include "totlab/retrieval.hpp"

#include <algorithm>

#include "totlab/error.hpp"

namespace totlab {

int WordNode::n() const { return parts.empty() ? 0 : parts.begin()->second.net.n(); }

void WordNode::validate() const {
  if (parts.empty()) throw ConfigError("word node '" + id + "' has no parts");
  const int size = n();
  for (const auto& [name, part] : parts) {
    if (part.net.n() != size || part.pattern.size() != size) {
      throw ConfigError("word node '" + id + "': part '" + name + "' does not match size " +
                        std::to_string(size));
    }
  }
}

Localization localize(const WordNode& node, const MetaMemory& meta, const std::string& target,
                      const LocalizationError& error) {
  if (!node.parts.contains(target)) throw ConfigError("unknown target part '" + target + "'");
  for (const auto& name : error.mislocalize) {
    if (!node.parts.contains(name)) throw ConfigError("cannot mislocalize unknown part '" + name + "'");
    const auto decoy = error.decoys.find(name);
    if (decoy == error.decoys.end()) throw ConfigError("no decoy network configured for '" + name + "'");
    if (decoy->second.n() != node.n()) throw ConfigError("decoy for '" + name + "' has the wrong size");
  }
  Localization loc;
  for (const auto& [name, part] : node.parts) {
    if (error.mislocalize.contains(name)) {
      loc.selected.emplace(name, error.decoys.at(name));
      loc.mislocalized.insert(name);
    } else {
      loc.selected.emplace(name, part.net);
    }
  }
  loc.fok = meta.references.contains(target);
  return loc;
}

const BipolarVector& reference_for(const WordNode& node, const MetaMemory& meta,
                                   const std::string& part) {
  if (auto it = meta.references.find(part); it != meta.references.end()) return it->second;
  const auto it = node.parts.find(part);
  if (it == node.parts.end()) throw ConfigError("unknown part '" + part + "'");
  return it->second.pattern;
}

bool attempt(const SynapticMatrix& net, const BipolarVector& reference, const CueSpec& cue,
             TieRule tie, Rng& rng) {
  const BipolarVector input(draw_cue(reference, cue, rng));
  return matches_reference(decode(net, input, tie), reference);
}

SeriesOutcome run_series(const Localization& loc, const std::string& part,
                         const BipolarVector& reference, const SeriesConfig& cfg, Rng& rng,
                         const std::function<void(bool)>& on_attempt) {
  const auto it = loc.selected.find(part);
  if (it == loc.selected.end()) throw ConfigError("part '" + part + "' was not localized");
  if (cfg.limit < 1) throw ConfigError("series limit must be at least 1");
  SeriesOutcome out;
  while (out.attempts_used < cfg.limit) {
    ++out.attempts_used;
    const bool success = attempt(it->second, reference, cfg.cue, cfg.tie, rng);
    if (on_attempt) on_attempt(success);
    if (success) {
      out.resolved = true;
      break;
    }
  }
  return out;
}

std::string phase_name(const Phase& phase) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Persist>) return "persist";
        else if constexpr (std::is_same_v<T, FreeRecall>) return "free_recall";
        else return "relocalize";
      },
      phase);
}

namespace {

constexpr std::pair<EventType, const char*> kEventNames[] = {
    {EventType::localized_stage, "LocalizedStage"},
    {EventType::part_retrieved, "PartRetrieved"},
    {EventType::part_unretrieved, "PartUnretrieved"},
    {EventType::attempt_failed, "AttemptFailed"},
    {EventType::series_exhausted, "SeriesExhausted"},
    {EventType::fok_felt, "FOKFelt"},
    {EventType::relocalized, "Relocalized"},
    {EventType::resolved, "Resolved"},
    {EventType::throw_up_arms, "ThrowUpArms"},
    {EventType::gave_up, "GaveUp"},
};

}  // namespace

std::string event_name(EventType type) {
  for (const auto& [t, name] : kEventNames) {
    if (t == type) return name;
  }
  return "Unknown";
}

std::optional<EventType> event_from_name(const std::string& name) {
  for (const auto& [t, n] : kEventNames) {
    if (name == n) return t;
  }
  return std::nullopt;
}

bool EpisodeTrace::resolved() const { return count(EventType::resolved) > 0; }
bool EpisodeTrace::gave_up() const { return count(EventType::gave_up) > 0; }

int EpisodeTrace::count(EventType type) const {
  return static_cast<int>(std::count_if(events.begin(), events.end(),
                                        [type](const Event& e) { return e.type == type; }));
}

std::optional<std::size_t> EpisodeTrace::find(EventType type, std::size_t from) const {
  for (std::size_t i = from; i < events.size(); ++i) {
    if (events[i].type == type) return i;
  }
  return std::nullopt;
}

void EpisodeConfig::validate() const {
  node.validate();
  if (!node.parts.contains(target)) throw ConfigError("target part '" + target + "' not in word node");
  for (const auto& [name, ref] : meta.references) {
    if (ref.size() != node.n()) throw ConfigError("reference for '" + name + "' has the wrong size");
  }
  if (strategy.schedule.empty()) throw ConfigError("strategy schedule is empty");
  if (strategy.give_up_after < 1) throw ConfigError("give_up_after must be at least 1");
  if (series.limit < 1) throw ConfigError("series limit must be at least 1");
  validate_cue(series.cue, node.n());
  for (const auto& phase : strategy.schedule) {
    std::visit(
        [&](const auto& p) {
          if (p.series < 1) throw ConfigError("every phase needs at least one series");
          using T = std::decay_t<decltype(p)>;
          if constexpr (!std::is_same_v<T, FreeRecall>) validate_cue(p.cue, node.n());
        },
        phase);
  }
  for (auto t : {timing.t_localize, timing.t_attempt, timing.t_decision, timing.t_pulse}) {
    if (t < 0) throw ConfigError("timing durations must be non-negative");
  }
  if (arms_threshold < 0) throw ConfigError("arms_threshold must be non-negative");
}

EpisodeTrace run_episode(const EpisodeConfig& config, Rng& rng) {
  config.validate();
  EpisodeTrace trace;
  trace.phase_attempts.assign(config.strategy.schedule.size(), 0);
  int target_attempts = 0;

  // Timestamps come from the counters, so total_time always equals the
  // chronometry formula exactly.
  auto now = [&] { return expected_total_time(trace, config.timing); };
  auto emit = [&](EventType type, int phase, int attempt_index, std::string part = {},
                  std::optional<bool> fok = std::nullopt) {
    trace.events.push_back({type, now(), phase, attempt_index, std::move(part), fok});
  };
  auto finish = [&] {
    trace.total_time_ms = now();
    return trace;
  };

  Localization loc = localize(config.node, config.meta, config.target, config.initial_error);
  ++trace.n_localizations;
  emit(EventType::localized_stage, -1, 0, config.target, loc.fok);

  for (const auto& [name, part] : config.node.parts) {
    if (name == config.target) continue;
    const auto outcome = run_series(loc, name, reference_for(config.node, config.meta, name),
                                    config.series, rng, [&](bool) { ++trace.n_attempts; });
    emit(outcome.resolved ? EventType::part_retrieved : EventType::part_unretrieved, -1,
         target_attempts, name);
  }

  const BipolarVector& target_ref = reference_for(config.node, config.meta, config.target);
  const int n = config.node.n();
  bool exhausted_once = false;
  int since_relocalization = -1;

  for (std::size_t p = 0; p < config.strategy.schedule.size(); ++p) {
    const Phase& phase = config.strategy.schedule[p];
    const int phase_index = static_cast<int>(p);
    CueSpec cue;
    int series_count = 1;
    if (const auto* persist = std::get_if<Persist>(&phase)) {
      cue = persist->cue;
      series_count = persist->series;
    } else if (const auto* free = std::get_if<FreeRecall>(&phase)) {
      cue = {n, config.series.cue.noise};
      series_count = free->series;
    } else {
      const auto& reloc = std::get<Relocalize>(phase);
      cue = reloc.cue;
      series_count = reloc.series;
      loc = localize(config.node, config.meta, config.target,
                     {reloc.mislocalize, config.initial_error.decoys});
      ++trace.n_localizations;
      emit(EventType::relocalized, phase_index, target_attempts, config.target, loc.fok);
      since_relocalization = 0;
    }

    for (int s = 0; s < series_count; ++s) {
      const int remaining = config.strategy.give_up_after - target_attempts;
      if (remaining <= 0) {
        emit(EventType::gave_up, phase_index, target_attempts);
        return finish();
      }
      SeriesConfig cfg = config.series;
      cfg.cue = cue;
      cfg.limit = std::min(config.series.limit, remaining);
      const auto outcome = run_series(loc, config.target, target_ref, cfg, rng, [&](bool success) {
        ++trace.n_attempts;
        ++target_attempts;
        ++trace.phase_attempts[p];
        if (since_relocalization >= 0) ++since_relocalization;
        if (!success) emit(EventType::attempt_failed, phase_index, target_attempts);
      });

      if (outcome.resolved) {
        emit(EventType::resolved, phase_index, target_attempts);
        if (since_relocalization == 1 && target_attempts - 1 >= config.arms_threshold) {
          emit(EventType::throw_up_arms, phase_index, target_attempts);
        }
        return finish();
      }
      if (outcome.attempts_used < config.series.limit) {
        emit(EventType::gave_up, phase_index, target_attempts);
        return finish();
      }
      emit(EventType::series_exhausted, phase_index, target_attempts);
      if (!exhausted_once) {
        exhausted_once = true;
        if (loc.fok) emit(EventType::fok_felt, phase_index, target_attempts);
      }
    }
  }
  emit(EventType::gave_up, static_cast<int>(config.strategy.schedule.size()) - 1, target_attempts);
  return finish();
}

}  // namespace totlab
