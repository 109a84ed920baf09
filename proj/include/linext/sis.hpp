#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "linext/errors.hpp"
#include "linext/importance.hpp"
#include "linext/logspace.hpp"
#include "linext/parallel.hpp"
#include "linext/poset.hpp"
#include "linext/rng.hpp"

namespace linext {

/// One sample's estimate of |Lambda(P)|, carried in log space: a single
/// estimate can approach n! and its square overflows double precision long
/// before the sizes the experiments use.
struct LogEstimate {
  double log_value = 0.0;
  double value() const { return std::exp(log_value); }
};

struct SampleResult {
  LogEstimate estimate;
  Extension extension;
};

/// Spanning forest collected during a sampling run: parent[v] is the
/// ancestor whose deletion made v maximal, -1 for originally-maximal
/// elements.
struct SampledForest {
  std::vector<int> parent;
};

struct ForestSample {
  LogEstimate estimate;
  SampledForest forest;
  double log_upper_bound = 0.0;  // log |Lambda(F)| >= log |Lambda(P)|
};

struct BatchStats {
  std::int64_t samples = 0;
  double mean_estimate = 0.0;      // exp(log_mean_estimate); may overflow to inf
  double log_mean_estimate = 0.0;  // assembled stably from the log samples
  double relative_variance = 0.0;  // second moment / mean^2 - 1, clamped at 0
  double min_log_estimate = 0.0;
  double max_log_estimate = 0.0;
};

// Weighted selection matching the cumulative-sum scan of the sampling loop:
// draw x uniform in [0, total) and pick the first index whose running sum
// reaches x. The scan is bounded, so rounding at the top end cannot step past
// the last candidate.
struct RngChooser {
  SplitMix64& rng;
  std::size_t operator()(const std::vector<int>& /*candidates*/,
                         const std::vector<double>& weights, double total) {
    const double x = rng.next_double() * total;
    double cum = weights[0];
    std::size_t k = 0;
    while (cum < x && k + 1 < weights.size()) cum += weights[++k];
    return k;
  }
};

namespace detail {

// Core of the single-estimate walk. Runs alive-count rounds of: find the
// maximal set S, pick v in S with probability r(v)/r(S), multiply the
// estimate by r(S)/r(v), delete v. The caller's poset stays untouched: the
// walk deletes through a private liveness mask. d(v) is computed once, since
// descendant counts do not change while only maximal elements are deleted.
// on_delete(alive, v) fires before each deletion.
template <class Chooser, class OnDelete>
SampleResult single_walk(const Poset& p, const ImportanceSpec& spec,
                         Chooser&& choose, OnDelete&& on_delete) {
  if (p.alive_count() == 0) throw EmptyPosetError("single_estimate: empty poset");
  Bitset alive = p.alive_mask();
  const std::vector<int> d = p.descendant_counts();
  int remaining = p.alive_count();
  double log_est = 0.0;
  Extension order;
  order.reserve(std::size_t(remaining));
  std::vector<int> maxes;
  std::vector<double> weights;
  while (remaining > 0) {
    maxes.clear();
    alive.for_each_set([&](int v) {
      if (!intersects(p.ancestors_row(v), alive)) maxes.push_back(v);
    });
    std::size_t k = 0;
    if (maxes.size() > 1) {
      weights.resize(maxes.size());
      double total = 0.0;
      for (std::size_t i = 0; i < maxes.size(); ++i) {
        weights[i] = importance(spec, maxes[i], d[std::size_t(maxes[i])], remaining);
        total += weights[i];
      }
      k = choose(maxes, weights, total);
      log_est += std::log(total / weights[k]);
    }
    // single candidate: factor r(S)/r(v) = 1 exactly, no randomness consumed
    const int v = maxes[k];
    on_delete(static_cast<const Bitset&>(alive), v);
    order.push_back(v);
    alive.reset(v);
    --remaining;
  }
  return {LogEstimate{log_est}, std::move(order)};
}

struct NoOpDelete {
  void operator()(const Bitset&, int) const {}
};

}  // namespace detail

/// Algorithm-1 walk with an explicit selection policy; `choose` is called as
/// choose(candidates, weights, weight_sum) -> index at every real branch
/// point. The test suites drive this with scripted and enumerating choosers.
template <class Chooser>
SampleResult single_estimate_with(const Poset& p, const ImportanceSpec& spec,
                                  Chooser&& choose) {
  return detail::single_walk(p, spec, std::forward<Chooser>(choose),
                             detail::NoOpDelete{});
}

/// One SIS estimate of |Lambda(P)| plus the linear extension it generated.
/// Deletions go through a private liveness mask; the caller's poset is
/// unchanged.
inline SampleResult single_estimate(const Poset& p, const ImportanceSpec& spec,
                                    SplitMix64& rng) {
  return single_estimate_with(p, spec, RngChooser{rng});
}

/// log(n! / prod_v d(v)): the descendants-importance floor, a lower bound on
/// every such sample and on |Lambda(P)| itself.
inline double log_count_lower_bound(const Poset& p) {
  if (p.alive_count() == 0) throw EmptyPosetError("log_count_lower_bound: empty poset");
  double r = log_factorial(p.alive_count());
  for (int d : p.descendant_counts())
    if (d > 0) r -= std::log(double(d));
  return r;
}

/// Runs the Algorithm-1 walk while tracking remaining-ancestor counts; when
/// deleting u leaves v with no alive ancestor, the edge u -> v joins the
/// spanning forest. The forest's extension count (computed from its subtree
/// sizes) upper-bounds |Lambda(P)|.
template <class Chooser>
ForestSample sample_with_forest_with(const Poset& p, const ImportanceSpec& spec,
                                     Chooser&& choose) {
  if (p.alive_count() == 0) throw EmptyPosetError("sample_with_forest: empty poset");
  const int n = p.size();
  std::vector<int> anc_left = p.ancestor_counts();
  SampledForest forest;
  forest.parent.assign(std::size_t(n), -1);
  auto on_delete = [&](const Bitset& alive, int chosen) {
    const Bitset& below = p.descendants_row(chosen);
    alive.for_each_set([&](int v) {
      if (!below.test(v)) return;
      if (--anc_left[std::size_t(v)] == 0) forest.parent[std::size_t(v)] = chosen;
    });
  };
  SampleResult res =
      detail::single_walk(p, spec, std::forward<Chooser>(choose), on_delete);
  // Subtree sizes: parents are always deleted before their children, so a
  // reverse sweep of the extension sees children first.
  std::vector<std::int64_t> subtree(std::size_t(n), 0);
  for (int v : res.extension) subtree[std::size_t(v)] = 1;
  double log_upper = log_factorial(int(res.extension.size()));
  for (auto it = res.extension.rbegin(); it != res.extension.rend(); ++it) {
    const int v = *it;
    if (forest.parent[std::size_t(v)] >= 0)
      subtree[std::size_t(forest.parent[std::size_t(v)])] += subtree[std::size_t(v)];
    log_upper -= std::log(double(subtree[std::size_t(v)]));
  }
  return {res.estimate, std::move(forest), log_upper};
}

inline ForestSample sample_with_forest(const Poset& p, const ImportanceSpec& spec,
                                       SplitMix64& rng) {
  return sample_with_forest_with(p, spec, RngChooser{rng});
}

/// Uniform sampling over the extensions of a forest: with descendants
/// importance every path has probability 1/|Lambda(P)| exactly.
inline Extension sample_forest_extension_uniform(const Poset& p, SplitMix64& rng) {
  if (!p.is_forest())
    throw NotForestError("sample_forest_extension_uniform: poset is not a forest");
  return single_estimate(p, ImportanceSpec::descendants(), rng).extension;
}

namespace detail {

// Recursive connected-components estimate over `scope`, a subset of the
// alive elements reachable from the original poset by maximal deletions.
// Multiplies in the multinomial over component sizes, then per component
// performs one selection step and recurses on what is left of it.
template <class Chooser>
double recursive_walk(const Poset& p, const ImportanceSpec& spec,
                      const std::vector<int>& d, Chooser& choose, Bitset scope) {
  const int cnt = scope.count();
  if (cnt <= 1) return 0.0;
  const ComponentPartition part = p.connected_components_within(scope);
  std::vector<Bitset> comps(std::size_t(part.component_count()), Bitset(p.size()));
  scope.for_each_set(
      [&](int v) { comps[std::size_t(part.assignment[std::size_t(v)])].set(v); });
  double log_est = log_multinomial(cnt, part.sizes);
  std::vector<int> maxes;
  std::vector<double> weights;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    Bitset& comp = comps[c];
    const int comp_size = part.sizes[c];
    maxes.clear();
    comp.for_each_set([&](int v) {
      if (!intersects(p.ancestors_row(v), comp)) maxes.push_back(v);
    });
    std::size_t k = 0;
    if (maxes.size() > 1) {
      weights.resize(maxes.size());
      double total = 0.0;
      for (std::size_t i = 0; i < maxes.size(); ++i) {
        weights[i] = importance(spec, maxes[i], d[std::size_t(maxes[i])], comp_size);
        total += weights[i];
      }
      k = choose(maxes, weights, total);
      log_est += std::log(total / weights[k]);
    }
    comp.reset(maxes[k]);
    log_est += recursive_walk(p, spec, d, choose, std::move(comp));
  }
  return log_est;
}

}  // namespace detail

/// Algorithm-2 walk (recursive connected components) with an explicit
/// selection policy.
template <class Chooser>
LogEstimate recursive_estimate_with(const Poset& p, const ImportanceSpec& spec,
                                    Chooser&& choose) {
  if (p.alive_count() == 0) throw EmptyPosetError("recursive_estimate: empty poset");
  const std::vector<int> d = p.descendant_counts();
  auto& chooser = choose;
  return LogEstimate{detail::recursive_walk(p, spec, d, chooser, p.alive_mask())};
}

/// Recursive connected-components estimate of |Lambda(P)|: unbiased like the
/// plain walk, with the multinomial over component sizes factored in exactly.
inline LogEstimate recursive_estimate(const Poset& p, const ImportanceSpec& spec,
                                      SplitMix64& rng) {
  RngChooser chooser{rng};
  return recursive_estimate_with(p, spec, chooser);
}

/// Batch statistics from realized log-space samples: mean via log-sum-exp,
/// relative variance as second moment over squared mean minus one.
inline BatchStats stats_from_log_samples(std::span<const double> logs) {
  if (logs.empty()) throw std::invalid_argument("stats_from_log_samples: no samples");
  BatchStats st;
  st.samples = std::int64_t(logs.size());
  st.min_log_estimate = logs[0];
  st.max_log_estimate = logs[0];
  for (double x : logs) {
    st.min_log_estimate = std::min(st.min_log_estimate, x);
    st.max_log_estimate = std::max(st.max_log_estimate, x);
  }
  const double log_k = std::log(double(logs.size()));
  const double lse1 = logsumexp(logs);
  const double lse2 = logsumexp_scaled(logs, 2.0);
  st.log_mean_estimate = lse1 - log_k;
  st.mean_estimate = std::exp(st.log_mean_estimate);
  st.relative_variance =
      std::max(0.0, std::expm1(lse2 - log_k - 2.0 * st.log_mean_estimate));
  return st;
}

/// k independent samples with per-sample generators derived from `seed`
/// (sample i uses derive_seed(seed, i)); deterministic given the arguments
/// and independent of the worker count.
inline BatchStats run_batch(const Poset& p, const ImportanceSpec& spec,
                            std::int64_t samples, std::uint64_t seed,
                            bool recursive = false, int threads = 1) {
  if (samples < 1) throw std::invalid_argument("run_batch: need at least one sample");
  if (p.alive_count() == 0) throw EmptyPosetError("run_batch: empty poset");
  std::vector<double> logs(static_cast<std::size_t>(samples));
  detail::parallel_chunks(samples, threads, [&](std::int64_t i0, std::int64_t i1) {
    for (std::int64_t i = i0; i < i1; ++i) {
      SplitMix64 rng(derive_seed(seed, std::uint64_t(i)));
      logs[std::size_t(i)] = recursive
                                 ? recursive_estimate(p, spec, rng).log_value
                                 : single_estimate(p, spec, rng).estimate.log_value;
    }
  });
  return stats_from_log_samples(logs);
}

}  // namespace linext
