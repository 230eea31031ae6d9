#pragma once

// Seeded generators for property tests.

#include <algorithm>
#include <random>
#include <vector>

#include "totlab/netcore.hpp"

namespace gen {

using Engine = std::mt19937_64;

inline totlab::BipolarVector bipolar(Engine& e, int n) {
  return totlab::BipolarVector::from_bits(e(), n);
}

/// Sum of 1..max_patterns random outer products.
inline totlab::SynapticMatrix trained_net(Engine& e, int n, int max_patterns = 3) {
  std::vector<totlab::BipolarVector> patterns;
  const int count = 1 + static_cast<int>(e() % static_cast<unsigned>(max_patterns));
  for (int p = 0; p < count; ++p) patterns.push_back(bipolar(e, n));
  return totlab::train_multi(patterns);
}

inline totlab::DamageSpec dead_inputs(Engine& e, int n, int k) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  std::shuffle(idx.begin(), idx.end(), e);
  totlab::DamageSpec d;
  d.dead_inputs = {idx.begin(), idx.begin() + k};
  return d;
}

inline totlab::DamageSpec severed_links(Engine& e, int n, int count) {
  totlab::DamageSpec d;
  while (static_cast<int>(d.severed_links.size()) < count) {
    d.severed_links.emplace(static_cast<int>(e() % static_cast<unsigned>(n)),
                            static_cast<int>(e() % static_cast<unsigned>(n)));
  }
  return d;
}

/// Either kind of damage, or none.
inline totlab::DamageSpec any_damage(Engine& e, int n) {
  switch (e() % 3) {
    case 0: return {};
    case 1: return dead_inputs(e, n, 1 + static_cast<int>(e() % static_cast<unsigned>(n - 1)));
    default: return severed_links(e, n, static_cast<int>(e() % static_cast<unsigned>(n * n / 2)));
  }
}

}  // namespace gen
