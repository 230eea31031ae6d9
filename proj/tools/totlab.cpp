// totlab: recall curves, damage ensembles and retrieval episodes from the
// command line.
//
//   totlab curve    --matrix M.json --reference X.json [--damage D.json]
//   totlab ensemble --matrix M.json --reference X.json --mode dead-neurons --k 4
//   totlab ensemble --matrix M.json --reference X.json --mode links --count 10 --samples 1000
//   totlab simulate --config episode.json [--seed S]
//   totlab scenario chekhov [--seed S]
//   totlab demo-search --reference X.json [--seed S] [--candidates C]
//
// Primary output goes to --out, or stdout. Human-readable summaries go to
// stdout when --out is given and to stderr otherwise.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "totlab/curvelab.hpp"
#include "totlab/error.hpp"
#include "totlab/io.hpp"
#include "totlab/retrieval.hpp"
#include "totlab/scenario.hpp"

namespace {

using namespace totlab;
using io::json;

struct Options {
  std::string matrix;
  std::string reference;
  std::string damage;
  std::string mode = "dead-neurons";
  std::string config;
  std::string scenario;
  std::string out;
  std::string table;
  std::string report_out;
  std::string noise = "replacement";
  std::string tie = "retain_input";
  std::uint64_t seed = 0;
  int k = 4;
  int count = 10;
  std::int64_t samples = 1000;
  int candidates = 32;
  double delta_steep = Thresholds{}.delta_steep;
  std::optional<int> limit;
  std::optional<int> arms_threshold;
};

void emit(const Options& opt, const std::string& primary, const std::string& summary) {
  if (opt.out.empty()) {
    std::cout << primary;
    std::cerr << summary;
  } else {
    io::write_text_file(opt.out, primary);
    std::cout << summary;
  }
}

SynapticMatrix load_matrix(const Options& opt) {
  SynapticMatrix w = io::matrix_from_json(io::read_json_file(opt.matrix));
  if (!opt.damage.empty()) w = apply_damage(w, io::damage_from_json(io::read_json_file(opt.damage)));
  return w;
}

int cmd_curve(const Options& opt) {
  const SynapticMatrix w = load_matrix(opt);
  const BipolarVector x = io::bipolar_from_json(io::read_json_file(opt.reference));
  const RecallCurve curve =
      recall_curve(w, x, io::noise_from_name(opt.noise), io::tie_from_name(opt.tie));
  const std::string summary = "P(0) = " + to_string(curve.at(0)) +
                              "\nP(1) = " + to_string(curve.at(curve.n())) + "\n";
  emit(opt, io::curve_to_csv(curve), summary);
  return 0;
}

int cmd_ensemble(const Options& opt) {
  const SynapticMatrix w = load_matrix(opt);
  const BipolarVector x = io::bipolar_from_json(io::read_json_file(opt.reference));
  const NoiseModel noise = io::noise_from_name(opt.noise);
  const TieRule tie = io::tie_from_name(opt.tie);
  const Thresholds thresholds{opt.delta_steep};

  EnsembleReport report;
  if (opt.mode == "dead-neurons") {
    report = damage_ensemble_dead(w, x, opt.k, noise, tie, thresholds);
  } else if (opt.mode == "links") {
    report = damage_ensemble_links(w, x, opt.count, opt.samples, opt.seed, noise, tie, thresholds);
  } else {
    throw ConfigError("unknown --mode '" + opt.mode + "' (dead-neurons|links)");
  }

  std::string summary = "ensemble size " + std::to_string(report.ensemble_size) + ", " +
                        std::to_string(report.classes.size()) + " classes, TOT probability " +
                        to_string(report.tot_probability) + "\n";
  if (report.mode == EnsembleMode::dead_neurons_exact && w.n() == 9 && opt.k == 4) {
    const std::string table = reproduction_report(report, report.mean_free_recall()).render();
    if (!opt.table.empty()) io::write_text_file(opt.table, table);
    summary += table;
  }
  emit(opt, io::to_json(report).dump(2) + "\n", summary);
  return 0;
}

int cmd_simulate(const Options& opt) {
  EpisodeConfig cfg = io::episode_from_json(io::read_json_file(opt.config));
  if (opt.limit) cfg.series.limit = *opt.limit;
  if (opt.arms_threshold) cfg.arms_threshold = *opt.arms_threshold;
  cfg.validate();
  Rng rng = make_stream(opt.seed, 0);
  const EpisodeTrace trace = run_episode(cfg, rng);
  std::string summary = std::string(trace.resolved() ? "resolved" : "gave up") + " after " +
                        std::to_string(trace.n_attempts) + " attempts, " +
                        std::to_string(trace.total_time_ms) + " ms\n";
  emit(opt, io::to_json(trace, cfg.timing).dump(2) + "\n", summary);
  return 0;
}

int cmd_scenario(const Options& opt) {
  if (opt.scenario != "chekhov") throw ConfigError("unknown scenario '" + opt.scenario + "'");
  ChekhovConfig cfg = chekhov_config();
  if (opt.limit) cfg.episode.series.limit = *opt.limit;
  if (opt.arms_threshold) cfg.episode.arms_threshold = *opt.arms_threshold;
  const ChekhovRun run = run_chekhov(cfg, opt.seed);
  emit(opt, io::to_json(run.trace, cfg.episode.timing).dump(2) + "\n",
       render_narrative(run.narrative, run.trace));
  return 0;
}

int cmd_demo_search(const Options& opt) {
  const BipolarVector x = io::bipolar_from_json(io::read_json_file(opt.reference));
  const auto found = search_demo_matrix(x, opt.seed, opt.candidates, opt.k, 0.10,
                                        Thresholds{opt.delta_steep});
  if (!found) throw RuntimeError("no candidate produced a rare TOT class");
  json demo = io::to_json(found->matrix);
  demo["patterns"] = json::array({x.to_vector(), found->companion.to_vector()});
  demo["search"] = {{"seed", opt.seed},
                    {"candidates", opt.candidates}, {"winner_index", found->candidate_index},
                    {"dead_inputs", opt.k},
                    {"delta_steep", opt.delta_steep}};
  if (!opt.report_out.empty()) {
    io::write_text_file(opt.report_out, io::to_json(found->report).dump(2) + "\n");
  }
  emit(opt, demo.dump(2) + "\n",
       "companion pattern at candidate " + std::to_string(found->candidate_index) +
           "; TOT probability " + to_string(found->report.tot_probability) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tip-of-the-tongue simulation laboratory"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", opt.seed, "Run seed (all random streams derive from it)");
    sub->add_option("--out", opt.out, "Output file (default: stdout)");
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--noise", opt.noise, "replacement|flip");
    sub->add_option("--tie", opt.tie, "retain_input|force_positive|force_negative");
    sub->add_option("--delta-steep", opt.delta_steep, "Minimum origin drop for a TOT curve");
  };

  auto* curve = app.add_subcommand("curve", "Exact recall curve as CSV");
  curve->add_option("--matrix", opt.matrix, "Matrix JSON")->required();
  curve->add_option("--reference", opt.reference, "Reference vector JSON")->required();
  curve->add_option("--damage", opt.damage, "Damage spec JSON");
  add_common(curve);
  add_model(curve);

  auto* ensemble = app.add_subcommand("ensemble", "Damage ensemble report as JSON");
  ensemble->add_option("--matrix", opt.matrix, "Matrix JSON")->required();
  ensemble->add_option("--reference", opt.reference, "Reference vector JSON")->required();
  ensemble->add_option("--damage", opt.damage, "Damage applied before the ensemble");
  ensemble->add_option("--mode", opt.mode, "dead-neurons|links");
  ensemble->add_option("--k", opt.k, "Dead input neurons per configuration");
  ensemble->add_option("--count", opt.count, "Severed links per configuration");
  ensemble->add_option("--samples", opt.samples, "Sampled link configurations");
  ensemble->add_option("--table", opt.table, "Also write the reproduction table here");
  add_common(ensemble);
  add_model(ensemble);

  auto* simulate = app.add_subcommand("simulate", "Run one retrieval episode");
  simulate->add_option("--config", opt.config, "Episode config JSON")->required();
  simulate->add_option("--limit", opt.limit, "Attempts per series");
  simulate->add_option("--arms-threshold", opt.arms_threshold, "Prior attempts for ThrowUpArms");
  add_common(simulate);

  auto* scenario = app.add_subcommand("scenario", "Run a shipped scenario");
  scenario->add_option("name", opt.scenario, "Scenario name (chekhov)")->required();
  scenario->add_option("--limit", opt.limit, "Attempts per series");
  scenario->add_option("--arms-threshold", opt.arms_threshold, "Prior attempts for ThrowUpArms");
  add_common(scenario);

  auto* demo = app.add_subcommand("demo-search", "Search for a symmetry-breaking TOT matrix");
  demo->add_option("--reference", opt.reference, "Reference vector JSON")->required();
  demo->add_option("--candidates", opt.candidates, "Candidate patterns to try");
  demo->add_option("--k", opt.k, "Dead input neurons per configuration");
  demo->add_option("--report", opt.report_out, "Write the ensemble report here");
  demo->add_option("--delta-steep", opt.delta_steep, "Minimum origin drop for a TOT curve");
  add_common(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*curve) return cmd_curve(opt);
    if (*ensemble) return cmd_ensemble(opt);
    if (*simulate) return cmd_simulate(opt);
    if (*scenario) return cmd_scenario(opt);
    if (*demo) return cmd_demo_search(opt);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
