#include "totlab/curvelab.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

#include "totlab/error.hpp"
#include "totlab/parallel.hpp"

namespace totlab {

namespace {

// 3^16 decodes per curve is still quick; beyond that exact enumeration is
// impractical and the Monte Carlo estimator should be used.
constexpr int kMaxExactN = 16;

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void require_dimensions(const SynapticMatrix& w, const BipolarVector& x) {
  if (w.n() != x.size()) {
    throw ConfigError("reference length " + std::to_string(x.size()) + " != network size " +
                      std::to_string(w.n()));
  }
}

// Success count over all cue inputs with m noisy positions.
std::int64_t count_successes(const Decoder& decoder, const Units& x, int m, NoiseModel noise) {
  const int n = static_cast<int>(x.size());
  Units v = x;
  std::vector<int> positions(static_cast<std::size_t>(m));
  std::int64_t successes = 0;

  auto visit_subset = [&](std::uint64_t subset) {
    int t = 0;
    for (int i = 0; i < n; ++i) {
      if ((subset >> i) & 1U) positions[static_cast<std::size_t>(t++)] = i;
    }
    if (noise == NoiseModel::flip) {
      for (int p : positions) v[p] = -x[p];
      if (decoder.recalls(v, x)) ++successes;
    } else {
      const std::uint64_t assignments = std::uint64_t{1} << m;
      for (std::uint64_t a = 0; a < assignments; ++a) {
        for (int s = 0; s < m; ++s) v[positions[static_cast<std::size_t>(s)]] = ((a >> s) & 1U) ? 1 : -1;
        if (decoder.recalls(v, x)) ++successes;
      }
    }
    for (int p : positions) v[p] = x[p];
  };

  if (m == 0) {
    visit_subset(0);
    return successes;
  }
  // Gosper's hack: all n-bit masks with popcount m in increasing order.
  std::uint64_t subset = (std::uint64_t{1} << m) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (subset < limit) {
    visit_subset(subset);
    const std::uint64_t c = subset & (~subset + 1);
    const std::uint64_t r = subset + c;
    subset = (((r ^ subset) >> 2) / c) | r;
  }
  return successes;
}

Rational exact_point(const Decoder& decoder, const Units& x, int m, NoiseModel noise) {
  const int n = static_cast<int>(x.size());
  std::int64_t total = binomial(n, m);
  if (noise == NoiseModel::replacement) total <<= m;
  return Rational(count_successes(decoder, x, m, noise), total);
}

std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(static_cast<std::size_t>(k));
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace

void validate_cue(const CueSpec& cue, int n) {
  if (cue.m < 0 || cue.m > n) {
    throw ConfigError("cue noise count m=" + std::to_string(cue.m) + " outside [0," +
                      std::to_string(n) + "]");
  }
}

Units draw_cue(const BipolarVector& x, const CueSpec& cue, Rng& rng) {
  const int n = x.size();
  validate_cue(cue, n);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int t = 0; t < cue.m; ++t) {
    const auto pick = t + static_cast<int>(draw_below(rng, static_cast<std::uint64_t>(n - t)));
    std::swap(order[static_cast<std::size_t>(t)], order[static_cast<std::size_t>(pick)]);
  }
  Units v = x.units();
  for (int t = 0; t < cue.m; ++t) {
    const int p = order[static_cast<std::size_t>(t)];
    v[p] = cue.noise == NoiseModel::flip ? -v[p] : (draw_bit(rng) ? 1 : -1);
  }
  return v;
}

RecallCurve::RecallCurve(std::vector<Rational> probabilities) : probs_(std::move(probabilities)) {
  if (probs_.size() < 2) throw ConfigError("recall curve needs points m = 0..n with n >= 1");
  for (const auto& p : probs_) {
    if (p < kZero || p > kOne) throw ConfigError("recall probability " + to_string(p) + " outside [0,1]");
  }
}

Rational EnsembleReport::mean_free_recall() const {
  Rational total(0);
  for (const auto& c : classes) total += c.probability * c.representative.at(c.representative.n());
  return total;
}

Rational recall_probability_exact(const SynapticMatrix& w, const BipolarVector& x,
                                  const CueSpec& cue, TieRule tie) {
  require_dimensions(w, x);
  validate_cue(cue, x.size());
  if (x.size() > kMaxExactN) {
    throw ConfigError("exact enumeration limited to n <= " + std::to_string(kMaxExactN));
  }
  return exact_point(Decoder(w, tie), x.units(), cue.m, cue.noise);
}

RecallCurve recall_curve(const SynapticMatrix& w, const BipolarVector& x, NoiseModel noise,
                         TieRule tie) {
  require_dimensions(w, x);
  if (x.size() > kMaxExactN) {
    throw ConfigError("exact enumeration limited to n <= " + std::to_string(kMaxExactN));
  }
  const Decoder decoder(w, tie);
  std::vector<Rational> probs;
  probs.reserve(static_cast<std::size_t>(x.size() + 1));
  for (int m = 0; m <= x.size(); ++m) probs.push_back(exact_point(decoder, x.units(), m, noise));
  return RecallCurve(std::move(probs));
}

McEstimate recall_probability_mc(const SynapticMatrix& w, const BipolarVector& x,
                                 const CueSpec& cue, TieRule tie, std::int64_t samples,
                                 std::uint64_t seed) {
  require_dimensions(w, x);
  validate_cue(cue, x.size());
  if (samples < 1) throw ConfigError("Monte Carlo needs at least one sample");
  const Decoder decoder(w, tie);
  Rng rng = make_stream(seed, 0);
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    if (decoder.recalls(draw_cue(x, cue, rng), x.units())) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

Classification classify_curve(const RecallCurve& curve, const Thresholds& thresholds) {
  const Rational drop = curve.at(0) - curve.at(1);
  const double origin_drop = to_double(drop);
  return {curve.at(0) == kOne && origin_drop >= thresholds.delta_steep, origin_drop};
}

double tot_strength(const RecallCurve& tot, const RecallCurve& reference) {
  if (tot.n() != reference.n()) throw ConfigError("tot_strength: curves differ in network size");
  Rational best(0);
  for (int m = 0; m <= tot.n(); ++m) best = std::max(best, reference.at(m) - tot.at(m));
  return to_double(best);
}

EnsembleReport build_report(EnsembleMode mode, const std::vector<DamageSpec>& configs,
                            const std::vector<RecallCurve>& curves, const Thresholds& thresholds) {
  if (configs.size() != curves.size() || configs.empty()) {
    throw ConfigError("ensemble needs one curve per damage configuration");
  }
  EnsembleReport report;
  report.mode = mode;
  report.ensemble_size = static_cast<std::int64_t>(configs.size());

  std::map<std::vector<Rational>, std::size_t> index;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    auto [it, inserted] = index.try_emplace(curves[c].probabilities(), report.classes.size());
    if (inserted) {
      CurveClass cls;
      cls.representative = curves[c];
      const auto verdict = classify_curve(curves[c], thresholds);
      cls.is_tot = verdict.is_tot;
      cls.origin_drop = verdict.origin_drop;
      report.classes.push_back(std::move(cls));
    }
    report.classes[it->second].members.push_back(configs[c]);
  }

  const CurveClass* baseline = nullptr;
  report.tot_probability = 0;
  for (auto& cls : report.classes) {
    cls.probability = Rational(static_cast<std::int64_t>(cls.members.size()), report.ensemble_size);
    if (cls.is_tot) {
      report.tot_probability += cls.probability;
    } else if (baseline == nullptr || cls.probability > baseline->probability) {
      baseline = &cls;
    }
  }
  report.tot_strength = 0.0;
  if (baseline != nullptr) {
    for (const auto& cls : report.classes) {
      if (cls.is_tot) {
        report.tot_strength =
            std::max(report.tot_strength, tot_strength(cls.representative, baseline->representative));
      }
    }
  }
  return report;
}

EnsembleReport damage_ensemble_dead(const SynapticMatrix& w, const BipolarVector& x, int k,
                                    NoiseModel noise, TieRule tie, const Thresholds& thresholds) {
  require_dimensions(w, x);
  if (k < 1 || k >= w.n()) {
    throw ConfigError("dead-neuron count k=" + std::to_string(k) + " must satisfy 1 <= k < n");
  }
  const auto subsets = k_subsets(w.n(), k);
  std::vector<DamageSpec> configs(subsets.size());
  std::vector<RecallCurve> curves(subsets.size());
  for (std::size_t c = 0; c < subsets.size(); ++c) {
    configs[c].dead_inputs = {subsets[c].begin(), subsets[c].end()};
  }
  parallel_for_index(configs.size(), [&](std::size_t c) {
    curves[c] = recall_curve(apply_damage(w, configs[c]), x, noise, tie);
  });
  return build_report(EnsembleMode::dead_neurons_exact, configs, curves, thresholds);
}

EnsembleReport damage_ensemble_links(const SynapticMatrix& w, const BipolarVector& x,
                                     int link_count, std::int64_t samples, std::uint64_t seed,
                                     NoiseModel noise, TieRule tie, const Thresholds& thresholds) {
  require_dimensions(w, x);
  if (samples < 1) throw ConfigError("link ensemble needs at least one sample");
  std::vector<Link> present;
  for (int i = 0; i < w.n(); ++i) {
    for (int j = 0; j < w.n(); ++j) {
      if (w.link_intact(i, j)) present.emplace_back(i, j);
    }
  }
  if (link_count < 0 || link_count >= static_cast<int>(present.size())) {
    throw ConfigError("link count " + std::to_string(link_count) + " must be below the " +
                      std::to_string(present.size()) + " intact links");
  }
  const auto count = static_cast<std::size_t>(samples);
  std::vector<DamageSpec> configs(count);
  std::vector<RecallCurve> curves(count);
  parallel_for_index(count, [&](std::size_t s) {
    Rng rng = make_stream(seed, s);
    std::vector<Link> pool = present;
    for (int t = 0; t < link_count; ++t) {
      const auto pick = t + draw_below(rng, pool.size() - static_cast<std::size_t>(t));
      std::swap(pool[static_cast<std::size_t>(t)], pool[pick]);
    }
    configs[s].severed_links = {pool.begin(), pool.begin() + link_count};
    curves[s] = recall_curve(apply_damage(w, configs[s]), x, noise, tie);
  });
  return build_report(EnsembleMode::links_sampled, configs, curves, thresholds);
}

ReproductionTable reproduction_report(const EnsembleReport& report, const Rational& free_recall,
                                      const ReproductionTargets& targets) {
  std::vector<std::size_t> order(report.classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return report.classes[a].probability > report.classes[b].probability;
  });

  std::optional<std::size_t> rarest_tot;
  for (std::size_t idx : order) {
    if (report.classes[idx].is_tot) rarest_tot = idx;
  }
  std::vector<std::size_t> rest;
  for (std::size_t idx : order) {
    if (idx != rarest_tot) rest.push_back(idx);
  }

  auto row = [&](std::string label, double target, std::optional<Rational> computed) {
    ReproductionRow r{std::move(label), target, computed, false};
    if (computed) r.match = std::abs(to_double(*computed) - target) <= targets.tolerance;
    return r;
  };
  auto class_prob = [&](std::size_t pos) -> std::optional<Rational> {
    if (pos >= rest.size()) return std::nullopt;
    return report.classes[rest[pos]].probability;
  };

  ReproductionTable table;
  table.rows.push_back(row("curve 1 probability", targets.curve1, class_prob(0)));
  table.rows.push_back(row("curve 2 probability", targets.curve2, class_prob(1)));
  table.rows.push_back(row("curve 3 (TOT) probability", targets.curve3,
                           rarest_tot ? std::optional(report.classes[*rarest_tot].probability)
                                      : std::nullopt));
  table.rows.push_back(row("free recall P(1)", targets.free_recall, free_recall));
  return table;
}

std::string ReproductionTable::render() const {
  std::ostringstream out;
  out << std::left << std::setw(28) << "quantity" << std::setw(10) << "target" << std::setw(12)
      << "computed" << std::setw(10) << "value" << "status\n";
  bool any_divergence = false;
  for (const auto& r : rows) {
    out << std::left << std::setw(28) << r.label << std::setw(10) << std::fixed
        << std::setprecision(3) << r.target;
    if (r.computed) {
      out << std::setw(12) << to_string(*r.computed) << std::setw(10) << std::setprecision(4)
          << to_double(*r.computed);
    } else {
      out << std::setw(12) << "absent" << std::setw(10) << "-";
    }
    out << (r.match ? "MATCH" : "DIVERGES") << '\n';
    any_divergence = any_divergence || !r.match;
  }
  if (any_divergence) {
    out << "note: DIVERGES rows are expected; the original synaptic matrix and decoding rule "
           "behind the target figures are not available, so the built-in one-shot "
           "threshold rule stands in for them.\n";
  }
  return out.str();
}

std::optional<DemoSearchResult> search_demo_matrix(const BipolarVector& x, std::uint64_t seed,
                                                   int max_candidates, int k, double max_tot,
                                                   const Thresholds& thresholds) {
  const int n = x.size();
  if (n > kMaxExactN) throw ConfigError("demo search limited to n <= " + std::to_string(kMaxExactN));
  std::vector<std::uint64_t> order(std::size_t{1} << n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = make_stream(seed, 0);
  for (std::size_t t = 0; t + 1 < order.size(); ++t) {
    std::swap(order[t], order[t + draw_below(rng, order.size() - t)]);
  }

  int examined = 0;
  std::optional<DemoSearchResult> best;
  for (std::uint64_t bits : order) {
    if (examined >= max_candidates) break;
    const BipolarVector z = BipolarVector::from_bits(bits, n);
    if (z == x || z == -x) continue;
    ++examined;
    const std::vector<BipolarVector> patterns{x, z};
    SynapticMatrix w = train_multi(patterns);
    EnsembleReport report = damage_ensemble_dead(w, x, k, NoiseModel::replacement,
                                                 TieRule::retain_input, thresholds);
    const bool rare_tot = std::any_of(report.classes.begin(), report.classes.end(), [&](const auto& c) {
      return c.is_tot && to_double(c.probability) < max_tot;
    });
    if (report.classes.size() < 2 || !rare_tot) continue;
    if (!best || report.tot_probability < best->report.tot_probability) {
      best = DemoSearchResult{x, z, std::move(w), std::move(report), examined};
    }
  }
  return best;
}

}  // namespace totlab
