#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "linext/errors.hpp"
#include "linext/poset.hpp"

namespace linext {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kDefaultExactLimit = 24;
inline constexpr std::int64_t kDefaultEnumerationLimit = 1'000'000;
inline constexpr int kDefaultLabeledLimit = 5;

inline BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// (sum sizes)! / prod(sizes[i]!)
inline BigInt multinomial(const std::vector<int>& sizes) {
  int total = 0;
  for (int s : sizes) total += s;
  BigInt r = factorial(total);
  for (int s : sizes) r /= factorial(s);
  return r;
}

namespace detail {

// Alive sub-poset compacted to bit positions 0..count-1 so downset states
// fit in one machine word.
struct CompactPoset {
  int count = 0;
  std::vector<std::uint64_t> desc;  // strict descendants, compact indices
  std::vector<std::uint64_t> anc;
  std::vector<int> elements;  // compact index -> original element

  std::uint64_t full_mask() const {
    return count == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << count) - 1;
  }
};

inline CompactPoset compact_alive(const Poset& p, int limit) {
  const int k = p.alive_count();
  if (k > limit)
    throw SizeLimitError("poset has " + std::to_string(k) +
                         " alive elements, exact limit is " + std::to_string(limit));
  CompactPoset cp;
  cp.count = k;
  cp.elements = p.alive_mask().to_vector();
  std::vector<int> position(std::size_t(p.size()), -1);
  for (int i = 0; i < k; ++i) position[std::size_t(cp.elements[std::size_t(i)])] = i;
  cp.desc.assign(std::size_t(k), 0);
  cp.anc.assign(std::size_t(k), 0);
  for (int i = 0; i < k; ++i) {
    const int v = cp.elements[std::size_t(i)];
    const Bitset& below = p.descendants_row(v);
    p.alive_mask().for_each_set([&](int w) {
      if (below.test(w)) {
        cp.desc[std::size_t(i)] |= std::uint64_t(1) << position[std::size_t(w)];
        cp.anc[std::size_t(position[std::size_t(w)])] |= std::uint64_t(1) << i;
      }
    });
  }
  return cp;
}

// Memoized downset DP: count(S) = sum over maximal m in S of count(S \ m),
// count(empty) = 1. Reachable states are exactly the downsets of the poset.
class DownsetCounter {
 public:
  explicit DownsetCounter(CompactPoset cp) : cp_(std::move(cp)) {}

  const CompactPoset& poset() const { return cp_; }

  BigInt count(std::uint64_t mask) {
    if (mask == 0) return 1;
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    BigInt total = 0;
    std::uint64_t rest = mask;
    while (rest) {
      const int m = std::countr_zero(rest);
      rest &= rest - 1;
      if (cp_.anc[std::size_t(m)] & mask) continue;  // not maximal in S
      total += count(mask & ~(std::uint64_t(1) << m));
    }
    memo_.emplace(mask, total);
    return total;
  }

  BigInt count_all() { return count(cp_.full_mask()); }

 private:
  CompactPoset cp_;
  std::unordered_map<std::uint64_t, BigInt> memo_;
};

}  // namespace detail

/// Exact |Lambda(P)| over the alive elements. Throws SizeLimitError when the
/// alive count exceeds `limit`.
inline BigInt exact_count(const Poset& p, int limit = kDefaultExactLimit) {
  detail::DownsetCounter counter(detail::compact_alive(p, limit));
  return counter.count_all();
}

/// Number of extensions that begin with maximal element m: the count of the
/// poset with m deleted. Throws NotMaximalError if m is not maximal.
inline BigInt count_starting_with(const Poset& p, int m,
                                  int limit = kDefaultExactLimit) {
  if (m < 0 || m >= p.size() || !p.is_alive(m))
    throw NotMaximalError("count_starting_with: element not alive");
  if (intersects(p.ancestors_row(m), p.alive_mask()))
    throw NotMaximalError("count_starting_with: element " + std::to_string(m) +
                          " is not maximal");
  Poset q = p;
  q.delete_element(m);
  return exact_count(q, limit);
}

/// Calls fn(const Extension&) once per linear extension, in lexicographic
/// order of the chosen-first sequences. No size guard: callers bound the
/// input themselves (see enumerate_extensions).
template <class Fn>
void for_each_extension(const Poset& p, Fn&& fn) {
  const int depth_cap = p.alive_count();
  Bitset remaining = p.alive_mask();
  Extension prefix;
  prefix.reserve(std::size_t(depth_cap));
  // per-depth scratch keeps the hot loop allocation-free
  std::vector<std::vector<int>> maxes_at(std::size_t(depth_cap) + 1);
  auto rec = [&](auto&& self, int depth) -> void {
    if (remaining.none()) {
      fn(static_cast<const Extension&>(prefix));
      return;
    }
    std::vector<int>& maxes = maxes_at[std::size_t(depth)];
    maxes.clear();
    remaining.for_each_set([&](int m) {
      if (!intersects(p.ancestors_row(m), remaining)) maxes.push_back(m);
    });
    for (int m : maxes) {
      prefix.push_back(m);
      remaining.reset(m);
      self(self, depth + 1);
      remaining.set(m);
      prefix.pop_back();
    }
  };
  rec(rec, 0);
}

/// Every linear extension exactly once. Throws SizeLimitError once more than
/// `limit` extensions have been produced.
inline std::vector<Extension> enumerate_extensions(
    const Poset& p, std::int64_t limit = kDefaultEnumerationLimit) {
  std::vector<Extension> out;
  for_each_extension(p, [&](const Extension& ext) {
    if (std::int64_t(out.size()) >= limit)
      throw SizeLimitError("enumerate_extensions: more than " +
                           std::to_string(limit) + " extensions");
    out.push_back(ext);
  });
  return out;
}

/// Closed-form forest count n! / prod_v d(v). Throws NotForestError when some
/// element has two incomparable ancestors.
inline BigInt forest_count(const Poset& p) {
  if (!p.is_forest()) throw NotForestError("forest_count: poset is not a forest");
  BigInt denom = 1;
  for (int d : p.descendant_counts())
    if (d > 0) denom *= d;
  BigInt q, r;
  boost::multiprecision::divide_qr(factorial(p.alive_count()), denom, q, r);
  assert(r == 0);  // hook products divide n! on forests
  return q;
}

/// Every labeled strict partial order on n elements, exactly once, in a fixed
/// deterministic order. n is capped by `limit` (the space grows super fast).
inline std::vector<Poset> enumerate_labeled_posets(int n,
                                                   int limit = kDefaultLabeledLimit) {
  if (n < 0) throw IndexError("enumerate_labeled_posets: negative size");
  if (n > limit)
    throw SizeLimitError("enumerate_labeled_posets: size " + std::to_string(n) +
                         " above limit " + std::to_string(limit));
  std::vector<std::pair<int, int>> slots;  // unordered pairs i < j
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  // Each unordered pair is incomparable, i > j, or j > i; walk the base-3
  // odometer and keep the transitive assignments (antisymmetry and
  // irreflexivity hold by construction).
  std::vector<int> state(slots.size(), 0);
  std::vector<std::vector<bool>> rel(std::size_t(n), std::vector<bool>(std::size_t(n), false));
  std::vector<Poset> out;
  for (;;) {
    for (auto& row : rel) row.assign(std::size_t(n), false);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (state[s] == 1) rel[std::size_t(slots[s].first)][std::size_t(slots[s].second)] = true;
      if (state[s] == 2) rel[std::size_t(slots[s].second)][std::size_t(slots[s].first)] = true;
    }
    bool transitive = true;
    for (int k = 0; k < n && transitive; ++k)
      for (int i = 0; i < n && transitive; ++i) {
        if (!rel[std::size_t(i)][std::size_t(k)]) continue;
        for (int j = 0; j < n; ++j)
          if (rel[std::size_t(k)][std::size_t(j)] && !rel[std::size_t(i)][std::size_t(j)]) {
            transitive = false;
            break;
          }
      }
    if (transitive) {
      std::vector<std::pair<int, int>> relations;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (rel[std::size_t(i)][std::size_t(j)]) relations.emplace_back(i, j);
      out.push_back(Poset::from_relations(n, relations));
    }
    // advance odometer
    std::size_t s = 0;
    while (s < slots.size() && state[s] == 2) state[s++] = 0;
    if (s == slots.size()) break;
    ++state[s];
  }
  return out;
}

}  // namespace linext
