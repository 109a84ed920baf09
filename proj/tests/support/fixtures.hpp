#pragma once

// Small posets used across the test suites.

#include <utility>
#include <vector>

#include "linext/poset.hpp"
#include "linext/rng.hpp"

namespace linext::testing {

// Elements a=0, b=1, c=2, d=3 with a>c, b>c, b>d: four elements, five linear
// extensions, the running example of the estimator tests.
inline Poset n_poset() { return Poset::from_relations(4, {{0, 2}, {1, 2}, {1, 3}}); }

// Elements a=0, b=1, c=2, d=3, e=4 with a>d, b>d, b>e and c isolated:
// maximal elements a, b, c with d(a)=2, d(b)=3, d(c)=1.
inline Poset n_plus_isolated() {
  return Poset::from_relations(5, {{0, 3}, {1, 3}, {1, 4}});
}

inline Poset chain(int n) {
  std::vector<std::pair<int, int>> rel;
  for (int i = 0; i + 1 < n; ++i) rel.emplace_back(i, i + 1);
  return Poset::from_relations(n, rel);
}

inline Poset antichain(int n) { return Poset::from_relations(n, {}); }

// Root 0 covering leaves 1..leaves.
inline Poset out_star(int leaves) {
  std::vector<std::pair<int, int>> rel;
  for (int i = 1; i <= leaves; ++i) rel.emplace_back(0, i);
  return Poset::from_relations(leaves + 1, rel);
}

// Random forest: each element past the first gets a parent among its
// predecessors with probability root_prob complemented; cover edges are
// exactly the parent links.
inline Poset random_forest(int n, SplitMix64& rng, double root_prob = 0.25) {
  std::vector<std::pair<int, int>> rel;
  for (int v = 1; v < n; ++v) {
    if (rng.next_double() < root_prob) continue;  // v is a root
    const int parent = int(rng.next() % std::uint64_t(v));
    rel.emplace_back(parent, v);
  }
  return Poset::from_relations(n, rel);
}

// Disjoint union of 2..3 random posets on index blocks, for component tests.
inline Poset random_disconnected(int max_block, SplitMix64& rng) {
  const int blocks = 2 + int(rng.next() % 2);
  std::vector<std::pair<int, int>> rel;
  int base = 0;
  for (int b = 0; b < blocks; ++b) {
    const int sz = 1 + int(rng.next() % std::uint64_t(max_block));
    for (int i = 0; i < sz; ++i)
      for (int j = i + 1; j < sz; ++j)
        if (rng.next_double() < 0.5) rel.emplace_back(base + i, base + j);
    base += sz;
  }
  return Poset::from_relations(base, rel);
}

}  // namespace linext::testing
