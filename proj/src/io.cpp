#include "totlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "totlab/error.hpp"

namespace totlab::io {

namespace {

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

json rational_pair(const Rational& r) { return json::array({r.numerator(), r.denominator()}); }

Rational rational_from(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw ConfigError("rational denominator must be positive");
  return Rational(num, den);
}

Rational rational_from_pair(const json& j) {
  return rational_from(j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>());
}

CueSpec cue_from(const json& j, NoiseModel default_noise) {
  CueSpec cue;
  cue.m = j.value("m", 0);
  cue.noise = j.contains("noise") ? noise_from_name(j.at("noise").get<std::string>()) : default_noise;
  return cue;
}

// A part or decoy: explicit matrix, or a pattern trained with the default rule.
SynapticMatrix net_from(const json& j, const BipolarVector* pattern) {
  if (j.contains("matrix")) return matrix_from_json(j.at("matrix"));
  if (j.contains("pattern")) return train_hebbian(bipolar_from_json(j.at("pattern")));
  if (pattern != nullptr) return train_hebbian(*pattern);
  throw ConfigError("network needs a 'matrix' or a 'pattern'");
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path.string());
  out << text;
  if (!out) throw RuntimeError("write failed for " + path.string());
}

std::string noise_name(NoiseModel noise) {
  return noise == NoiseModel::flip ? "flip" : "replacement";
}

NoiseModel noise_from_name(const std::string& name) {
  if (name == "replacement") return NoiseModel::replacement;
  if (name == "flip") return NoiseModel::flip;
  throw ConfigError("unknown noise model '" + name + "' (replacement|flip)");
}

std::string tie_name(TieRule tie) {
  switch (tie) {
    case TieRule::force_positive: return "force_positive";
    case TieRule::force_negative: return "force_negative";
    case TieRule::retain_input: break;
  }
  return "retain_input";
}

TieRule tie_from_name(const std::string& name) {
  if (name == "retain_input") return TieRule::retain_input;
  if (name == "force_positive") return TieRule::force_positive;
  if (name == "force_negative") return TieRule::force_negative;
  throw ConfigError("unknown tie rule '" + name + "' (retain_input|force_positive|force_negative)");
}

std::string mode_name(EnsembleMode mode) {
  return mode == EnsembleMode::links_sampled ? "links_sampled" : "dead_neurons_exact";
}

EnsembleMode mode_from_name(const std::string& name) {
  if (name == "dead_neurons_exact") return EnsembleMode::dead_neurons_exact;
  if (name == "links_sampled") return EnsembleMode::links_sampled;
  throw ConfigError("unknown ensemble mode '" + name + "'");
}

json to_json(const BipolarVector& v) { return {{"components", v.to_vector()}}; }

BipolarVector bipolar_from_json(const json& j) {
  return guarded("bipolar vector", [&] {
    const json& c = j.is_array() ? j : j.at("components");
    return BipolarVector(std::span<const Unit>(c.get<std::vector<Unit>>()));
  });
}

json to_json(const SynapticMatrix& w) {
  json weights = json::array();
  for (int i = 0; i < w.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < w.n(); ++j) row.push_back(w.weights()(i, j));
    weights.push_back(std::move(row));
  }
  json severed = json::array();
  for (const auto& [i, j] : w.severed()) severed.push_back({i, j});
  return {{"n", w.n()},
          {"weights", std::move(weights)},
          {"severed", std::move(severed)},
          {"dead_inputs", std::vector<int>(w.dead_inputs().begin(), w.dead_inputs().end())}};
}

SynapticMatrix matrix_from_json(const json& j) {
  return guarded("synaptic matrix", [&] {
    const int n = j.at("n").get<int>();
    const auto& rows = j.at("weights");
    if (n < 1 || static_cast<int>(rows.size()) != n) throw ConfigError("weights must have n rows");
    Weights w(n, n);
    for (int i = 0; i < n; ++i) {
      const auto row = rows.at(static_cast<std::size_t>(i)).get<std::vector<Unit>>();
      if (static_cast<int>(row.size()) != n) throw ConfigError("weights must have n columns");
      for (int c = 0; c < n; ++c) w(i, c) = row[static_cast<std::size_t>(c)];
    }
    std::set<Link> severed;
    for (const auto& l : j.value("severed", json::array())) {
      severed.emplace(l.at(0).get<int>(), l.at(1).get<int>());
    }
    const auto dead = j.value("dead_inputs", std::vector<int>{});
    return SynapticMatrix(std::move(w), std::move(severed), {dead.begin(), dead.end()});
  });
}

json to_json(const DamageSpec& d) {
  json severed = json::array();
  for (const auto& [i, j] : d.severed_links) severed.push_back({i, j});
  return {{"severed_links", std::move(severed)},
          {"dead_inputs", std::vector<int>(d.dead_inputs.begin(), d.dead_inputs.end())}};
}

DamageSpec damage_from_json(const json& j) {
  return guarded("damage spec", [&] {
    DamageSpec d;
    const char* key = j.contains("severed_links") ? "severed_links" : "severed";
    for (const auto& l : j.value(key, json::array())) {
      if (!d.severed_links.emplace(l.at(0).get<int>(), l.at(1).get<int>()).second) {
        throw ConfigError("duplicate severed link");
      }
    }
    for (int x : j.value("dead_inputs", std::vector<int>{})) {
      if (!d.dead_inputs.insert(x).second) throw ConfigError("duplicate dead input");
    }
    return d;
  });
}

std::string curve_to_csv(const RecallCurve& curve) {
  std::ostringstream out;
  out << "m,d,prob_num,prob_den,prob\n";
  char buf[64];
  for (int m = 0; m <= curve.n(); ++m) {
    const Rational& p = curve.at(m);
    std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(m) / curve.n());
    out << m << ',' << buf << ',' << p.numerator() << ',' << p.denominator() << ',';
    std::snprintf(buf, sizeof buf, "%.17g", to_double(p));
    out << buf << '\n';
  }
  return out.str();
}

RecallCurve curve_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "m,d,prob_num,prob_den,prob") {
    throw ConfigError("curve CSV: bad header");
  }
  std::vector<Rational> probs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string m, d, num, den;
    if (!std::getline(row, m, ',') || !std::getline(row, d, ',') || !std::getline(row, num, ',') ||
        !std::getline(row, den, ',')) {
      throw ConfigError("curve CSV: malformed row '" + line + "'");
    }
    if (std::stoi(m) != static_cast<int>(probs.size())) throw ConfigError("curve CSV: rows out of order");
    probs.push_back(rational_from(std::stoll(num), std::stoll(den)));
  }
  return RecallCurve(std::move(probs));
}

json to_json(const EnsembleReport& report) {
  json classes = json::array();
  for (const auto& c : report.classes) {
    json curve = json::array();
    for (const auto& p : c.representative.probabilities()) curve.push_back(rational_pair(p));
    json members = json::array();
    for (const auto& m : c.members) members.push_back(to_json(m));
    classes.push_back({{"probability_num", c.probability.numerator()},
                       {"probability_den", c.probability.denominator()},
                       {"is_tot", c.is_tot},
                       {"origin_drop", c.origin_drop},
                       {"curve", std::move(curve)},
                       {"members", std::move(members)}});
  }
  return {{"mode", mode_name(report.mode)},
          {"ensemble_size", report.ensemble_size},
          {"classes", std::move(classes)},
          {"tot_probability", to_double(report.tot_probability)},
          {"tot_probability_num", report.tot_probability.numerator()},
          {"tot_probability_den", report.tot_probability.denominator()},
          {"tot_strength", report.tot_strength}};
}

EnsembleReport report_from_json(const json& j) {
  return guarded("ensemble report", [&] {
    EnsembleReport r;
    r.mode = mode_from_name(j.at("mode").get<std::string>());
    r.ensemble_size = j.at("ensemble_size").get<std::int64_t>();
    for (const auto& c : j.at("classes")) {
      CurveClass cls;
      std::vector<Rational> probs;
      for (const auto& p : c.at("curve")) probs.push_back(rational_from_pair(p));
      cls.representative = RecallCurve(std::move(probs));
      for (const auto& m : c.at("members")) cls.members.push_back(damage_from_json(m));
      cls.probability = rational_from(c.at("probability_num").get<std::int64_t>(),
                                      c.at("probability_den").get<std::int64_t>());
      cls.is_tot = c.at("is_tot").get<bool>();
      cls.origin_drop = c.at("origin_drop").get<double>();
      r.classes.push_back(std::move(cls));
    }
    r.tot_probability = rational_from(j.at("tot_probability_num").get<std::int64_t>(),
                                      j.at("tot_probability_den").get<std::int64_t>());
    r.tot_strength = j.at("tot_strength").get<double>();
    return r;
  });
}

json to_json(const EpisodeTrace& trace, const TimingModel& timing) {
  json events = json::array();
  for (const auto& e : trace.events) {
    json ev = {{"type", event_name(e.type)},
               {"t_ms", e.t_ms},
               {"phase_index", e.phase_index},
               {"attempt_index", e.attempt_index}};
    if (!e.part.empty()) ev["part"] = e.part;
    if (e.fok) ev["fok"] = *e.fok;
    events.push_back(std::move(ev));
  }
  return {{"events", std::move(events)},
          {"phase_attempts", trace.phase_attempts},
          {"n_localizations", trace.n_localizations},
          {"n_attempts", trace.n_attempts},
          {"total_time_ms", trace.total_time_ms},
          {"outcome", trace.resolved() ? "resolved" : "gave_up"},
          {"timing",
           {{"t_localize", timing.t_localize},
            {"t_attempt", timing.t_attempt},
            {"t_decision", timing.t_decision},
            {"t_pulse", timing.t_pulse}}}};
}

EpisodeTrace trace_from_json(const json& j) {
  return guarded("episode trace", [&] {
    EpisodeTrace t;
    for (const auto& ev : j.at("events")) {
      Event e;
      const auto name = ev.at("type").get<std::string>();
      const auto type = event_from_name(name);
      if (!type) throw ConfigError("unknown event type '" + name + "'");
      e.type = *type;
      e.t_ms = ev.at("t_ms").get<double>();
      e.phase_index = ev.at("phase_index").get<int>();
      e.attempt_index = ev.at("attempt_index").get<int>();
      e.part = ev.value("part", std::string{});
      if (ev.contains("fok")) e.fok = ev.at("fok").get<bool>();
      t.events.push_back(std::move(e));
    }
    t.phase_attempts = j.at("phase_attempts").get<std::vector<int>>();
    t.n_localizations = j.at("n_localizations").get<int>();
    t.n_attempts = j.at("n_attempts").get<int>();
    t.total_time_ms = j.at("total_time_ms").get<double>();
    return t;
  });
}

EpisodeConfig episode_from_json(const json& j) {
  return guarded("episode config", [&] {
    EpisodeConfig cfg;
    const json& node = j.at("node");
    cfg.node.id = node.value("id", std::string{"word"});
    for (const auto& [name, part] : node.at("parts").items()) {
      BipolarVector pattern = bipolar_from_json(part.at("pattern"));
      SynapticMatrix net = part.contains("matrix") ? matrix_from_json(part.at("matrix"))
                                                   : train_hebbian(pattern);
      cfg.node.parts.emplace(name, WordPart{std::move(net), std::move(pattern)});
    }
    const json meta = j.value("meta", json::object());
    for (const auto& [name, ref] : meta.items()) {
      cfg.meta.references.emplace(name, bipolar_from_json(ref));
    }
    cfg.target = j.at("target").get<std::string>();
    for (const auto& name : j.value("mislocalize", std::vector<std::string>{})) {
      cfg.initial_error.mislocalize.insert(name);
    }
    const json decoys = j.value("decoys", json::object());
    for (const auto& [name, decoy] : decoys.items()) {
      cfg.initial_error.decoys.emplace(name, net_from(decoy, nullptr));
    }

    const json series = j.value("series", json::object());
    cfg.series.limit = series.value("limit", 20);
    cfg.series.tie = tie_from_name(series.value("tie", std::string{"retain_input"}));
    cfg.series.cue = cue_from(series, NoiseModel::replacement);

    const json& strategy = j.at("strategy");
    cfg.strategy.give_up_after = strategy.value("give_up_after", 1000);
    for (const auto& ph : strategy.at("schedule")) {
      const auto type = ph.at("type").get<std::string>();
      const int count = ph.value("series", 1);
      if (type == "persist") {
        cfg.strategy.schedule.push_back(Persist{cue_from(ph, cfg.series.cue.noise), count});
      } else if (type == "free_recall") {
        cfg.strategy.schedule.push_back(FreeRecall{count});
      } else if (type == "relocalize") {
        Relocalize r;
        r.cue = cue_from(ph, cfg.series.cue.noise);
        r.series = count;
        for (const auto& name : ph.value("mislocalize", std::vector<std::string>{})) r.mislocalize.insert(name);
        cfg.strategy.schedule.push_back(std::move(r));
      } else {
        throw ConfigError("unknown phase type '" + type + "'");
      }
    }

    const json timing = j.value("timing", json::object());
    cfg.timing.t_localize = timing.value("t_localize", cfg.timing.t_localize);
    cfg.timing.t_attempt = timing.value("t_attempt", cfg.timing.t_attempt);
    cfg.timing.t_decision = timing.value("t_decision", cfg.timing.t_decision);
    cfg.timing.t_pulse = timing.value("t_pulse", cfg.timing.t_pulse);
    cfg.arms_threshold = j.value("arms_threshold", 50);
    cfg.validate();
    return cfg;
  });
}

}  // namespace totlab::io
