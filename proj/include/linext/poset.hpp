#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "linext/bitset.hpp"
#include "linext/errors.hpp"
#include "linext/rng.hpp"

namespace linext {

// Cover edges (u, v): u > v with nothing strictly between. The edge set is
// the transitive reduction of the order, i.e. the Hasse diagram.
struct CoverDag {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  friend bool operator==(const CoverDag&, const CoverDag&) = default;
};

// Partition of the alive elements by connectivity in the undirected cover
// graph (equivalently the comparability graph; the partitions coincide).
struct ComponentPartition {
  std::vector<int> assignment;  // element -> component id, -1 for deleted
  std::vector<int> sizes;       // per-component alive element counts

  int component_count() const { return int(sizes.size()); }

  friend bool operator==(const ComponentPartition&,
                         const ComponentPartition&) = default;
};

// A linear extension in chosen-first orientation: whenever u > v, u appears
// before v. Produced by repeated deletion of maximal elements.
using Extension = std::vector<int>;

/// Strict partial order on elements 0..n-1, stored as its transitive
/// closure plus a liveness mask.
///
/// row(u) bit v set means u > v ("u is chosen before v"). Deleted elements
/// participate in no relation: every query masks with the alive set, and
/// deletion itself is a flag flip, cheap enough for the samplers that delete
/// n-1 elements per sample.
class Poset {
 public:
  Poset() = default;

  /// Builds the poset whose order is the transitive closure of `relations`
  /// (each pair (above, below) meaning above > below). Throws CycleError if
  /// the input implies u > u, IndexError on out-of-range indices.
  static Poset from_relations(int n,
                              const std::vector<std::pair<int, int>>& relations) {
    if (n < 0) throw IndexError("from_relations: negative element count");
    Poset p;
    p.n_ = n;
    p.desc_.assign(std::size_t(n), Bitset(n));
    p.anc_.assign(std::size_t(n), Bitset(n));
    p.alive_ = Bitset(n);
    p.alive_.set_first_n(n);
    for (auto [u, v] : relations) {
      if (u < 0 || u >= n || v < 0 || v >= n)
        throw IndexError("from_relations: element index out of range");
      p.desc_[std::size_t(u)].set(v);
    }
    // Warshall closure, row-parallel.
    for (int k = 0; k < n; ++k)
      for (int u = 0; u < n; ++u)
        if (p.desc_[std::size_t(u)].test(k))
          p.desc_[std::size_t(u)] |= p.desc_[std::size_t(k)];
    for (int v = 0; v < n; ++v)
      if (p.desc_[std::size_t(v)].test(v))
        throw CycleError("from_relations: relations imply a cycle through element " +
                         std::to_string(v));
    for (int u = 0; u < n; ++u)
      p.desc_[std::size_t(u)].for_each_set(
          [&](int v) { p.anc_[std::size_t(v)].set(u); });
    return p;
  }

  int size() const { return n_; }
  int alive_count() const { return alive_.count(); }
  bool is_alive(int v) const {
    check_index(v);
    return alive_.test(v);
  }
  const Bitset& alive_mask() const { return alive_; }

  // Closure rows over all elements, dead or alive; callers mask with
  // alive_mask() where liveness matters.
  const Bitset& descendants_row(int v) const {
    check_index(v);
    return desc_[std::size_t(v)];
  }
  const Bitset& ancestors_row(int v) const {
    check_index(v);
    return anc_[std::size_t(v)];
  }

  /// u > v, both alive.
  bool greater(int u, int v) const {
    check_index(u);
    check_index(v);
    return alive_.test(u) && alive_.test(v) && desc_[std::size_t(u)].test(v);
  }

  /// Alive elements with no alive element above them, as a mask.
  Bitset maximal_mask() const { return maximal_mask_within(alive_); }

  /// Maximal elements when `scope` (a subset of the alive set) is treated as
  /// the whole universe.
  Bitset maximal_mask_within(const Bitset& scope) const {
    Bitset covered(n_);
    scope.for_each_set([&](int u) { covered.or_and(desc_[std::size_t(u)], scope); });
    Bitset m = scope;
    m -= covered;
    return m;
  }

  /// Ascending list of maximal elements. Throws EmptyPosetError when no
  /// element is alive.
  std::vector<int> maximal_elements() const {
    if (!alive_.any()) throw EmptyPosetError("maximal_elements: empty poset");
    return maximal_mask().to_vector();
  }

  /// d(v) = 1 + |{alive w : v > w}| for alive v; 0 for deleted elements.
  std::vector<int> descendant_counts() const {
    std::vector<int> d(std::size_t(n_), 0);
    alive_.for_each_set(
        [&](int v) { d[std::size_t(v)] = 1 + count_and(desc_[std::size_t(v)], alive_); });
    return d;
  }

  /// a(v) = |{alive u : u > v}| for alive v; 0 for deleted elements.
  std::vector<int> ancestor_counts() const {
    std::vector<int> a(std::size_t(n_), 0);
    alive_.for_each_set(
        [&](int v) { a[std::size_t(v)] = count_and(anc_[std::size_t(v)], alive_); });
    return a;
  }

  void delete_element(int v) {
    check_index(v);
    if (!alive_.test(v))
      throw AlreadyDeletedError("delete_element: element " + std::to_string(v) +
                                " already deleted");
    alive_.reset(v);
  }

  /// Cover edges of the alive sub-order; re-closing them reproduces the
  /// closure restricted to alive elements.
  CoverDag transitive_reduction() const {
    CoverDag dag;
    dag.n = n_;
    alive_.for_each_set([&](int u) {
      const Bitset& below = desc_[std::size_t(u)];
      alive_.for_each_set([&](int v) {
        if (!below.test(v)) return;
        // u covers v iff no alive w has u > w > v.
        if (!intersects3(below, anc_[std::size_t(v)], alive_))
          dag.edges.emplace_back(u, v);
      });
    });
    return dag;
  }

  ComponentPartition connected_components() const {
    return connected_components_within(alive_);
  }

  /// Flood fill on the comparability graph restricted to `scope` (a subset
  /// of the alive elements); component ids are assigned in order of each
  /// component's smallest element.
  ComponentPartition connected_components_within(const Bitset& scope) const {
    assert(scope.is_subset_of(alive_));
    ComponentPartition part;
    part.assignment.assign(std::size_t(n_), -1);
    Bitset unvisited = scope;
    Bitset frontier(n_), next(n_);
    for (int v = 0; v < n_; ++v) {
      if (!unvisited.test(v)) continue;
      const int comp = part.component_count();
      int sz = 0;
      frontier.clear();
      frontier.set(v);
      unvisited.reset(v);
      while (frontier.any()) {
        next.clear();
        frontier.for_each_set([&](int u) {
          part.assignment[std::size_t(u)] = comp;
          ++sz;
          next.or_and(desc_[std::size_t(u)], unvisited);
          next.or_and(anc_[std::size_t(u)], unvisited);
        });
        unvisited -= next;
        std::swap(frontier, next);
      }
      part.sizes.push_back(sz);
    }
    return part;
  }

  /// True iff every alive element has at most one cover parent, i.e. the
  /// ancestors of every element form a chain.
  bool is_forest() const {
    Bitset above(n_);
    bool forest = true;
    alive_.for_each_set([&](int v) {
      if (!forest) return;
      above = anc_[std::size_t(v)];
      above &= alive_;
      int parents = 0;
      above.for_each_set([&](int u) {
        // u is a cover parent of v iff no other ancestor of v lies below u.
        if (parents <= 1 && !intersects(desc_[std::size_t(u)], above)) ++parents;
      });
      if (parents > 1) forest = false;
    });
    return forest;
  }

  friend bool operator==(const Poset&, const Poset&) = default;

 private:
  void check_index(int v) const {
    if (v < 0 || v >= n_)
      throw IndexError("element index " + std::to_string(v) +
                       " out of range for poset of size " + std::to_string(n_));
  }

  int n_ = 0;
  std::vector<Bitset> desc_;  // desc_[u].test(v) == (u > v), liveness ignored
  std::vector<Bitset> anc_;   // transpose of desc_
  Bitset alive_;
};

/// Random poset in the labeled upper-triangular model: each relation
/// v_i > v_j with i < j exists independently with probability `edge_prob`,
/// then the relation is transitively completed. Acyclic by construction and
/// deterministic given the seed.
inline Poset random_poset(int n, double edge_prob, std::uint64_t seed) {
  if (n < 0) throw IndexError("random_poset: negative element count");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
    throw DomainError("random_poset: edge_prob must be in [0, 1]");
  SplitMix64 rng(seed);
  std::vector<std::pair<int, int>> relations;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.next_double() < edge_prob) relations.emplace_back(i, j);
  return Poset::from_relations(n, relations);
}

/// True iff `ext` is a permutation of the alive elements in which u appears
/// before v whenever u > v.
inline bool is_extension_of(const Poset& p, const Extension& ext) {
  if (int(ext.size()) != p.alive_count()) return false;
  Bitset seen(p.size());
  for (int v : ext) {
    if (v < 0 || v >= p.size() || !p.is_alive(v) || seen.test(v)) return false;
    seen.set(v);
  }
  for (std::size_t t = 1; t < ext.size(); ++t) {
    // No later element may lie above an earlier one.
    const Bitset& below = p.descendants_row(ext[t]);
    for (std::size_t s = 0; s < t; ++s)
      if (below.test(ext[s])) return false;
  }
  return true;
}

}  // namespace linext
