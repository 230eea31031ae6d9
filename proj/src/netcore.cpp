#include "totlab/netcore.hpp"

#include <string>

#include "totlab/error.hpp"

namespace totlab {

namespace {

void require_bipolar(const Units& units) {
  if (units.size() < 1) throw ConfigError("bipolar vector must have at least one component");
  for (Eigen::Index i = 0; i < units.size(); ++i) {
    if (units[i] != 1 && units[i] != -1) {
      throw ConfigError("component " + std::to_string(i) + " is " + std::to_string(units[i]) +
                        ", expected +1 or -1");
    }
  }
}

void require_same_length(const BipolarVector& a, const BipolarVector& b, const char* what) {
  if (a.size() != b.size()) {
    throw ConfigError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) +
                      " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace

BipolarVector::BipolarVector(Units units) : units_(std::move(units)) { require_bipolar(units_); }

BipolarVector::BipolarVector(std::initializer_list<Unit> units)
    : BipolarVector(std::span<const Unit>(units.begin(), units.size())) {}

BipolarVector::BipolarVector(std::span<const Unit> units)
    : units_(Eigen::Map<const Units>(units.data(), static_cast<Eigen::Index>(units.size()))) {
  require_bipolar(units_);
}

BipolarVector BipolarVector::from_bits(std::uint64_t bits, int n) {
  Units u(n);
  for (int i = 0; i < n; ++i) u[i] = ((bits >> i) & 1U) ? 1 : -1;
  return BipolarVector(std::move(u));
}

BipolarVector BipolarVector::constant(int n, Unit value) {
  return BipolarVector(Units(Units::Constant(n, value)));
}

BipolarVector BipolarVector::alternating(int n) {
  Units u(n);
  for (int i = 0; i < n; ++i) u[i] = (i % 2 == 0) ? 1 : -1;
  return BipolarVector(std::move(u));
}

std::vector<Unit> BipolarVector::to_vector() const {
  return {units_.data(), units_.data() + units_.size()};
}

SynapticMatrix::SynapticMatrix(Weights weights) : SynapticMatrix(std::move(weights), {}, {}) {}

SynapticMatrix::SynapticMatrix(Weights weights, std::set<Link> severed, std::set<int> dead_inputs)
    : weights_(std::move(weights)), severed_(std::move(severed)), dead_inputs_(std::move(dead_inputs)) {
  if (weights_.rows() < 1 || weights_.rows() != weights_.cols()) {
    throw ConfigError("synaptic matrix must be square with n >= 1");
  }
  const int size = n();
  for (const auto& [i, j] : severed_) {
    if (i < 0 || i >= size || j < 0 || j >= size) {
      throw ConfigError("severed link (" + std::to_string(i) + "," + std::to_string(j) +
                        ") outside [0," + std::to_string(size) + ")");
    }
  }
  for (int j : dead_inputs_) {
    if (j < 0 || j >= size) throw ConfigError("dead input " + std::to_string(j) + " out of range");
  }
}

bool SynapticMatrix::link_intact(int i, int j) const {
  return !dead_inputs_.contains(j) && !severed_.contains({i, j});
}

Weights SynapticMatrix::effective_weights() const {
  Weights eff = weights_;
  for (int j : dead_inputs_) eff.col(j).setZero();
  for (const auto& [i, j] : severed_) eff(i, j) = 0;
  return eff;
}

SynapticMatrix train_hebbian(const BipolarVector& x, bool zero_diagonal) {
  Weights w = x.units() * x.units().transpose();
  if (zero_diagonal) w.diagonal().setZero();
  return SynapticMatrix(std::move(w));
}

SynapticMatrix train_multi(std::span<const BipolarVector> patterns) {
  if (patterns.empty()) throw ConfigError("train_multi needs at least one pattern");
  const int n = patterns.front().size();
  Weights w = Weights::Zero(n, n);
  for (const auto& p : patterns) {
    if (p.size() != n) throw ConfigError("train_multi: patterns differ in length");
    w.noalias() += p.units() * p.units().transpose();
  }
  return SynapticMatrix(std::move(w));
}

void validate_damage(const DamageSpec& spec, int n) {
  for (const auto& [i, j] : spec.severed_links) {
    if (i < 0 || i >= n || j < 0 || j >= n) {
      throw ConfigError("damage link (" + std::to_string(i) + "," + std::to_string(j) +
                        ") outside a " + std::to_string(n) + "-neuron network");
    }
  }
  for (int j : spec.dead_inputs) {
    if (j < 0 || j >= n) throw ConfigError("dead input " + std::to_string(j) + " out of range");
  }
  if (static_cast<int>(spec.dead_inputs.size()) >= n) {
    throw ConfigError("at least one input neuron must survive");
  }
}

SynapticMatrix apply_damage(const SynapticMatrix& w, const DamageSpec& spec) {
  validate_damage(spec, w.n());
  std::set<Link> severed = w.severed();
  severed.insert(spec.severed_links.begin(), spec.severed_links.end());
  std::set<int> dead = w.dead_inputs();
  dead.insert(spec.dead_inputs.begin(), spec.dead_inputs.end());
  if (static_cast<int>(dead.size()) >= w.n()) {
    throw ConfigError("at least one input neuron must survive");
  }
  return SynapticMatrix(w.weights(), std::move(severed), std::move(dead));
}

BipolarVector decode(const SynapticMatrix& w, const BipolarVector& v, TieRule tie) {
  if (v.size() != w.n()) {
    throw ConfigError("decode: input length " + std::to_string(v.size()) + " != network size " +
                      std::to_string(w.n()));
  }
  Decoder decoder(w, tie);
  Units y(v.size());
  decoder.decode(v.units(), y);
  return BipolarVector(std::move(y));
}

bool matches_reference(const BipolarVector& y, const BipolarVector& x) {
  require_same_length(y, x, "matches_reference");
  return y == x;
}

Decoder::Decoder(const SynapticMatrix& w, TieRule tie)
    : effective_(w.effective_weights()), tie_(tie), field_(w.n()) {}

}  // namespace totlab
