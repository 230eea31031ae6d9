#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "totlab/netcore.hpp"
#include "totlab/rational.hpp"
#include "totlab/rng.hpp"

namespace totlab {

/// replacement: each noisy unit is redrawn uniformly from {+1,-1};
/// flip: each noisy unit is negated.
enum class NoiseModel { replacement, flip };

/// m noisy positions out of n; distortion d = m/n, cue strength q = 1 - d.
struct CueSpec {
  int m = 0;
  NoiseModel noise = NoiseModel::replacement;

  double distortion(int n) const { return static_cast<double>(m) / n; }
  double cue_strength(int n) const { return 1.0 - distortion(n); }
};

void validate_cue(const CueSpec& cue, int n);

/// Draws one cue input: x with m positions chosen uniformly without
/// replacement, then noised. Consumes 2m engine draws for replacement noise
/// and m for flip noise.
Units draw_cue(const BipolarVector& x, const CueSpec& cue, Rng& rng);

/// Exact recall probabilities P(m/n) for m = 0..n.
class RecallCurve {
 public:
  RecallCurve() = default;
  explicit RecallCurve(std::vector<Rational> probabilities);

  int n() const { return static_cast<int>(probs_.size()) - 1; }
  const Rational& at(int m) const { return probs_.at(static_cast<std::size_t>(m)); }
  const std::vector<Rational>& probabilities() const { return probs_; }

  bool operator==(const RecallCurve&) const = default;

 private:
  std::vector<Rational> probs_;
};

struct Thresholds {
  double delta_steep = 0.10;
};

struct Classification {
  bool is_tot = false;
  double origin_drop = 0.0;
};

struct CurveClass {
  RecallCurve representative;
  std::vector<DamageSpec> members;
  Rational probability;
  bool is_tot = false;
  double origin_drop = 0.0;
};

enum class EnsembleMode { dead_neurons_exact, links_sampled };

struct EnsembleReport {
  EnsembleMode mode = EnsembleMode::dead_neurons_exact;
  std::int64_t ensemble_size = 0;
  std::vector<CurveClass> classes;
  Rational tot_probability;
  double tot_strength = 0.0;

  /// Class probabilities weighted by each class's P(d=1).
  Rational mean_free_recall() const;
};

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Averages the success indicator over every C(n,m) noise subset and, for
/// replacement noise, every 2^m assignment of the noisy units.
Rational recall_probability_exact(const SynapticMatrix& w, const BipolarVector& x,
                                  const CueSpec& cue, TieRule tie = TieRule::retain_input);

RecallCurve recall_curve(const SynapticMatrix& w, const BipolarVector& x,
                         NoiseModel noise = NoiseModel::replacement,
                         TieRule tie = TieRule::retain_input);

McEstimate recall_probability_mc(const SynapticMatrix& w, const BipolarVector& x,
                                 const CueSpec& cue, TieRule tie, std::int64_t samples,
                                 std::uint64_t seed);

/// origin_drop = P(0) - P(1/n); TOT when P(0) = 1 and the drop reaches
/// delta_steep.
Classification classify_curve(const RecallCurve& curve, const Thresholds& thresholds = {});

/// max_m (reference P(m) - tot P(m)), never below zero.
double tot_strength(const RecallCurve& tot, const RecallCurve& reference);

/// Groups (damage, curve) pairs into classes of exactly equal curves, in
/// first-seen order, and fills TOT probability and strength.
EnsembleReport build_report(EnsembleMode mode, const std::vector<DamageSpec>& configs,
                            const std::vector<RecallCurve>& curves, const Thresholds& thresholds);

/// Every k-subset of input neurons killed in turn (lexicographic order).
EnsembleReport damage_ensemble_dead(const SynapticMatrix& w, const BipolarVector& x, int k,
                                    NoiseModel noise = NoiseModel::replacement,
                                    TieRule tie = TieRule::retain_input,
                                    const Thresholds& thresholds = {});

/// `samples` uniformly drawn sets of `link_count` severed links out of the
/// links still intact in w (all n^2, diagonal included). Sample s uses its
/// own stream derived from (seed, s).
EnsembleReport damage_ensemble_links(const SynapticMatrix& w, const BipolarVector& x,
                                     int link_count, std::int64_t samples, std::uint64_t seed,
                                     NoiseModel noise = NoiseModel::replacement,
                                     TieRule tie = TieRule::retain_input,
                                     const Thresholds& thresholds = {});

/// Reference ensemble figures for the N=9, four-dead-neuron example.
struct ReproductionTargets {
  double curve1 = 0.468;
  double curve2 = 0.484;
  double curve3 = 0.048;
  double free_recall = 0.285;
  double tolerance = 0.05;
};

struct ReproductionRow {
  std::string label;
  double target = 0.0;
  std::optional<Rational> computed;
  bool match = false;
};

struct ReproductionTable {
  std::vector<ReproductionRow> rows;
  std::string render() const;
};

/// Pairs classes with the reference curve numbers: the rarest TOT class
/// stands for curve 3, the two most probable of the rest for curves 1 and 2.
ReproductionTable reproduction_report(const EnsembleReport& report, const Rational& free_recall,
                                      const ReproductionTargets& targets = {});

/// Result of the symmetry-breaking search for a TOT-producing matrix.
struct DemoSearchResult {
  BipolarVector reference;
  BipolarVector companion;
  SynapticMatrix matrix;
  EnsembleReport report;
  int candidate_index = 0;  // 1-based position of the winner in the shuffled order
};

/// Shuffles the 2^n bipolar vectors with `seed`, tries the first
/// `max_candidates` as a second stored pattern z next to x (skipping +-x).
/// A candidate qualifies when the k-dead ensemble of train_multi({x, z}) has
/// at least two classes and a TOT class with probability below `max_tot`;
/// the qualifier with the lowest total TOT probability wins, earliest first.
std::optional<DemoSearchResult> search_demo_matrix(const BipolarVector& x, std::uint64_t seed,
                                                   int max_candidates, int k = 4,
                                                   double max_tot = 0.10,
                                                   const Thresholds& thresholds = {});

}  // namespace totlab
