#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "linext/errors.hpp"
#include "linext/exact.hpp"
#include "linext/importance.hpp"
#include "linext/logspace.hpp"
#include "linext/poset.hpp"
#include "linext/sis.hpp"

namespace linext {

struct RvReport {
  std::string poset_id;
  ImportanceKind spec = ImportanceKind::Uniform;
  std::optional<double> rv_explicit;
  std::optional<double> rv_recursive;
  std::optional<double> empirical_rv;
  std::int64_t samples = 0;
};

struct LevelBound {
  int size = 0;
  double value = 1.0;  // A_i
  Poset witness;
  int witness_element = -1;
};

struct ReplayResult {
  double log_estimate = 0.0;
  double log_probability = 0.0;
};

/// Deterministically replays the single-estimate walk along `ext`,
/// accumulating the estimate (prod r(S)/r(v)) and the path probability
/// (prod r(v)/r(S)) separately. Throws InvalidExtensionError unless ext is a
/// linear extension of p.
inline ReplayResult replay_extension(const Poset& p, const ImportanceSpec& spec,
                                     const Extension& ext) {
  if (!is_extension_of(p, ext))
    throw InvalidExtensionError("replay_extension: not a linear extension of the poset");
  Bitset alive = p.alive_mask();
  const std::vector<int> d = p.descendant_counts();
  int remaining = p.alive_count();
  ReplayResult res;
  for (int chosen : ext) {
    int n_maxes = 0;
    double total = 0.0, w_chosen = 0.0;
    alive.for_each_set([&](int m) {
      if (intersects(p.ancestors_row(m), alive)) return;
      ++n_maxes;
      const double w = importance(spec, m, d[std::size_t(m)], remaining);
      total += w;
      if (m == chosen) w_chosen = w;
    });
    if (n_maxes > 1) {
      res.log_estimate += std::log(total / w_chosen);
      res.log_probability += std::log(w_chosen / total);
    }
    alive.reset(chosen);
    --remaining;
  }
  return res;
}

/// f_P(lambda) in log space: the estimate Algorithm 1 would produce if its
/// random choices followed `ext`.
inline double log_estimate_for_extension(const Poset& p, const ImportanceSpec& spec,
                                         const Extension& ext) {
  return replay_extension(p, spec, ext).log_estimate;
}

/// Relative variance by full enumeration: RV(P) = (sum_lambda f) / L^2 - 1.
/// Enumerates Lambda(P), so the usual oracle limits apply.
inline double rv_explicit(const Poset& p, const ImportanceSpec& spec,
                          int exact_limit = kDefaultExactLimit,
                          std::int64_t enum_limit = kDefaultEnumerationLimit) {
  const BigInt count = exact_count(p, exact_limit);
  if (count > enum_limit)
    throw SizeLimitError("rv_explicit: " + count.str() + " extensions exceed limit " +
                         std::to_string(enum_limit));
  std::vector<double> log_fs;
  log_fs.reserve(static_cast<std::size_t>(count));
  for_each_extension(p, [&](const Extension& ext) {
    log_fs.push_back(replay_extension(p, spec, ext).log_estimate);
  });
  const double log_count = std::log(double(count));
  return std::max(0.0, std::expm1(logsumexp(log_fs) - 2.0 * log_count));
}

namespace detail {

// RV(P)+1 = r(M)/L^2 * sum_{m in M} L_m^2/r(m) * (RV(P\m)+1), memoized on the
// alive mask. Descendant counts are static across states: reachable masks are
// downsets, which contain every descendant of their members.
class RvRecursion {
 public:
  RvRecursion(CompactPoset cp, const ImportanceSpec& spec)
      : counter_(std::move(cp)), spec_(spec) {
    const CompactPoset& P = counter_.poset();
    d_.resize(std::size_t(P.count));
    for (int i = 0; i < P.count; ++i)
      d_[std::size_t(i)] = 1 + std::popcount(P.desc[std::size_t(i)]);
  }

  double rv() { return std::max(0.0, rv_plus_one(counter_.poset().full_mask()) - 1.0); }

 private:
  double rv_plus_one(std::uint64_t mask) {
    const int cnt = std::popcount(mask);
    if (cnt <= 1) return 1.0;
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    const CompactPoset& P = counter_.poset();
    const double big = double(counter_.count(mask));
    double r_of_m_set = 0.0;
    double acc = 0.0;
    std::uint64_t rest = mask;
    while (rest) {
      const int m = std::countr_zero(rest);
      rest &= rest - 1;
      if (P.anc[std::size_t(m)] & mask) continue;
      const double r_m =
          importance(spec_, P.elements[std::size_t(m)], d_[std::size_t(m)], cnt);
      r_of_m_set += r_m;
      const std::uint64_t sub = mask & ~(std::uint64_t(1) << m);
      const double ratio = double(counter_.count(sub)) / big;  // L_m / L
      acc += ratio * ratio / r_m * rv_plus_one(sub);
    }
    const double result = r_of_m_set * acc;
    memo_.emplace(mask, result);
    return result;
  }

  DownsetCounter counter_;
  ImportanceSpec spec_;
  std::vector<int> d_;
  std::unordered_map<std::uint64_t, double> memo_;
};

}  // namespace detail

/// Relative variance via the subset recursion; agrees with rv_explicit.
inline double rv_recursive(const Poset& p, const ImportanceSpec& spec,
                           int exact_limit = kDefaultExactLimit) {
  detail::RvRecursion rec(detail::compact_alive(p, exact_limit), spec);
  return rec.rv();
}

/// A_i: the largest r(M)/r(m) * L_m/L over all labeled posets of size i and
/// all maximal m, with the witness attaining it. For the ASQ spec the
/// remaining count equals i, the size of the poset at that level.
inline LevelBound level_bound(int i, const ImportanceSpec& spec,
                              int limit = kDefaultLabeledLimit) {
  if (i < 1) throw DomainError("level_bound: poset size must be >= 1");
  LevelBound best;
  best.size = i;
  best.value = 0.0;
  for (const Poset& p : enumerate_labeled_posets(i, limit)) {
    const double big = double(exact_count(p));
    const std::vector<int> d = p.descendant_counts();
    const std::vector<int> maxes = p.maximal_elements();
    double r_of_m_set = 0.0;
    for (int m : maxes) r_of_m_set += importance(spec, m, d[std::size_t(m)], i);
    for (int m : maxes) {
      const double r_m = importance(spec, m, d[std::size_t(m)], i);
      const double val = r_of_m_set / r_m * double(count_starting_with(p, m)) / big;
      if (val > best.value) {
        best.value = val;
        best.witness = p;
        best.witness_element = m;
      }
    }
  }
  return best;
}

/// RV(P) <= A_1 ... A_n - 1 with precomputed level bounds A_1..A_n (or more).
inline bool check_product_bound(const Poset& p, const ImportanceSpec& spec,
                                std::span<const double> level_values) {
  const int n = p.alive_count();
  if (int(level_values.size()) < n)
    throw DomainError("check_product_bound: need a level bound per size 1..n");
  double prod = 1.0;
  for (int i = 0; i < n; ++i) prod *= level_values[std::size_t(i)];
  return rv_explicit(p, spec) <= prod - 1.0 + 1e-9;
}

inline bool check_product_bound(const Poset& p, const ImportanceSpec& spec,
                                int limit = kDefaultLabeledLimit) {
  const int n = p.alive_count();
  if (n > limit)
    throw SizeLimitError("check_product_bound: poset size above level-bound limit");
  std::vector<double> a;
  a.reserve(std::size_t(n));
  for (int i = 1; i <= n; ++i) a.push_back(level_bound(i, spec, limit).value);
  return check_product_bound(p, spec, std::span<const double>(a));
}

/// Pairs a sampled relative variance with the exact values whenever the
/// oracle limits allow computing them.
inline RvReport empirical_rv_convergence(const Poset& p, const ImportanceSpec& spec,
                                         std::int64_t samples, std::uint64_t seed,
                                         std::string poset_id = {}) {
  RvReport rep;
  rep.poset_id = std::move(poset_id);
  rep.spec = spec.kind;
  rep.samples = samples;
  rep.empirical_rv = run_batch(p, spec, samples, seed).relative_variance;
  try {
    rep.rv_explicit = rv_explicit(p, spec);
    rep.rv_recursive = rv_recursive(p, spec);
  } catch (const SizeLimitError&) {
    // beyond oracle limits: report the empirical value alone
  }
  return rep;
}

}  // namespace linext
