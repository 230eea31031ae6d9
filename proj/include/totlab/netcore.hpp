#pragma once

#include <cstdint>
#include <initializer_list>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace totlab {

using Unit = std::int32_t;
using Units = Eigen::Matrix<Unit, Eigen::Dynamic, 1>;
using Weights = Eigen::Matrix<Unit, Eigen::Dynamic, Eigen::Dynamic>;

/// Pattern of +1/-1 units. Construction rejects anything else.
class BipolarVector {
 public:
  BipolarVector() = default;
  explicit BipolarVector(Units units);
  BipolarVector(std::initializer_list<Unit> units);
  explicit BipolarVector(std::span<const Unit> units);

  /// Component i is +1 when bit i of `bits` is set, -1 otherwise.
  static BipolarVector from_bits(std::uint64_t bits, int n);
  static BipolarVector constant(int n, Unit value);
  /// +1, -1, +1, ... of length n.
  static BipolarVector alternating(int n);

  int size() const { return static_cast<int>(units_.size()); }
  Unit operator[](int i) const { return units_[i]; }
  const Units& units() const { return units_; }
  std::vector<Unit> to_vector() const;

  BipolarVector operator-() const { return BipolarVector(Units(-units_)); }
  bool operator==(const BipolarVector& other) const {
    return units_.size() == other.units_.size() && units_ == other.units_;
  }

 private:
  Units units_;
};

using Link = std::pair<int, int>;  // (output neuron i, input neuron j)

struct DamageSpec {
  std::set<Link> severed_links;
  std::set<int> dead_inputs;

  bool empty() const { return severed_links.empty() && dead_inputs.empty(); }
  auto operator<=>(const DamageSpec&) const = default;
};

enum class TieRule { retain_input, force_positive, force_negative };

/// Trained weights plus a damage mask. Damage never touches the base
/// weights; it only changes what effective_weights() reports.
class SynapticMatrix {
 public:
  SynapticMatrix() = default;
  explicit SynapticMatrix(Weights weights);
  SynapticMatrix(Weights weights, std::set<Link> severed, std::set<int> dead_inputs);

  int n() const { return static_cast<int>(weights_.rows()); }
  const Weights& weights() const { return weights_; }
  const std::set<Link>& severed() const { return severed_; }
  const std::set<int>& dead_inputs() const { return dead_inputs_; }

  bool link_intact(int i, int j) const;
  Weights effective_weights() const;

 private:
  Weights weights_;
  std::set<Link> severed_;
  std::set<int> dead_inputs_;
};

/// w_ij = x_i x_j; optionally with a zero diagonal.
SynapticMatrix train_hebbian(const BipolarVector& x, bool zero_diagonal = false);

/// Sum of outer products over all patterns.
SynapticMatrix train_multi(std::span<const BipolarVector> patterns);

/// Throws ConfigError when spec does not fit an n-neuron network.
void validate_damage(const DamageSpec& spec, int n);

SynapticMatrix apply_damage(const SynapticMatrix& w, const DamageSpec& spec);

/// One-shot threshold pass: y_i = sign(sum_j w_eff(i,j) v_j), ties per rule.
BipolarVector decode(const SynapticMatrix& w, const BipolarVector& v,
                     TieRule tie = TieRule::retain_input);

bool matches_reference(const BipolarVector& y, const BipolarVector& x);

/// Decoder with the effective weights cached, for hot enumeration loops.
/// Works on raw unit vectors so callers can reuse buffers. Holds a scratch
/// buffer: give each thread its own instance.
class Decoder {
 public:
  Decoder(const SynapticMatrix& w, TieRule tie);

  int n() const { return static_cast<int>(effective_.rows()); }

  template <typename In, typename Out>
  void decode(const Eigen::MatrixBase<In>& v, Eigen::MatrixBase<Out>& y) const {
    field_.noalias() = effective_ * v;
    for (Eigen::Index i = 0; i < field_.size(); ++i) y[i] = threshold(field_[i], v[i]);
  }

  /// True when decoding v reproduces x exactly.
  template <typename In>
  bool recalls(const Eigen::MatrixBase<In>& v, const Units& x) const {
    field_.noalias() = effective_ * v;
    for (Eigen::Index i = 0; i < field_.size(); ++i) {
      if (threshold(field_[i], v[i]) != x[i]) return false;
    }
    return true;
  }

 private:
  Unit threshold(Unit h, Unit input) const {
    if (h > 0) return 1;
    if (h < 0) return -1;
    switch (tie_) {
      case TieRule::force_positive: return 1;
      case TieRule::force_negative: return -1;
      case TieRule::retain_input: break;
    }
    return input;
  }

  Weights effective_;
  TieRule tie_;
  mutable Units field_;
};

}  // namespace totlab
