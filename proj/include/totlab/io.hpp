#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "totlab/curvelab.hpp"
#include "totlab/netcore.hpp"
#include "totlab/retrieval.hpp"

namespace totlab::io {

using nlohmann::json;

/// Parses a file; ConfigError with the parser message on failure.
json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string noise_name(NoiseModel noise);
NoiseModel noise_from_name(const std::string& name);
std::string tie_name(TieRule tie);
TieRule tie_from_name(const std::string& name);
std::string mode_name(EnsembleMode mode);
EnsembleMode mode_from_name(const std::string& name);

// {"components": [1, -1, ...]}
json to_json(const BipolarVector& v);
BipolarVector bipolar_from_json(const json& j);

// {"n", "weights", "severed", "dead_inputs"}
json to_json(const SynapticMatrix& w);
SynapticMatrix matrix_from_json(const json& j);

// {"severed_links": [[i, j]], "dead_inputs": [j]}
json to_json(const DamageSpec& d);
DamageSpec damage_from_json(const json& j);

/// Header `m,d,prob_num,prob_den,prob`; d printed to six places.
std::string curve_to_csv(const RecallCurve& curve);
RecallCurve curve_from_csv(const std::string& text);

json to_json(const EnsembleReport& report);
EnsembleReport report_from_json(const json& j);

json to_json(const EpisodeTrace& trace, const TimingModel& timing);
EpisodeTrace trace_from_json(const json& j);

EpisodeConfig episode_from_json(const json& j);

}  // namespace totlab::io
