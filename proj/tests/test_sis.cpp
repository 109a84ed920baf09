#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "linext/exact.hpp"
#include "linext/sis.hpp"
#include "linext/variance.hpp"
#include "support/fixtures.hpp"
#include "support/path_enum.hpp"

using namespace linext;
using testing::antichain;
using testing::chain;
using testing::exhaust_choice_tree;
using testing::n_poset;
using testing::n_plus_isolated;
using testing::out_star;
using testing::ScriptedChooser;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("importance values") {
  SECTION("asq at i=5 matches the labeled example") {
    const ImportanceSpec asq = ImportanceSpec::asq();
    CHECK_THAT(importance(asq, 0, 2, 5), WithinRel(6.0 / 4.0, 1e-15));
    CHECK_THAT(importance(asq, 1, 3, 5), WithinRel(7.0 / 3.0, 1e-15));
    CHECK_THAT(importance(asq, 2, 1, 5), WithinRel(1.0, 1e-15));
  }
  SECTION("descendants importance on n_plus_isolated maximals") {
    const ImportanceSpec d = ImportanceSpec::descendants();
    const Poset p = n_plus_isolated();
    const std::vector<int> counts = p.descendant_counts();
    CHECK(importance(d, 0, counts[0], 5) == 2.0);
    CHECK(importance(d, 1, counts[1], 5) == 3.0);
    CHECK(importance(d, 2, counts[2], 5) == 1.0);
  }
  SECTION("uniform is 1 everywhere") {
    CHECK(importance(ImportanceSpec::uniform(), 3, 4, 9) == 1.0);
  }
  SECTION("domain checks") {
    CHECK_THROWS_AS(importance(ImportanceSpec::asq(), 0, 6, 5), DomainError);
    CHECK_THROWS_AS(importance(ImportanceSpec::uniform(), 0, 0, 5), DomainError);
    CHECK_THROWS_AS(importance(ImportanceSpec::table_weights({1.0}), 1, 1, 5),
                    DomainError);
    CHECK_THROWS_AS(importance(ImportanceSpec::table_weights({0.0}), 0, 1, 5),
                    DomainError);
  }
}

TEST_CASE("single_estimate on the running example") {
  const Poset p = n_poset();
  SECTION("descendants importance estimates exactly the count on every path") {
    for (std::uint64_t seed = 0; seed < 24; ++seed) {
      SplitMix64 rng(seed);
      const SampleResult r = single_estimate(p, ImportanceSpec::descendants(), rng);
      CHECK_THAT(r.estimate.value(), WithinRel(5.0, 1e-12));
      CHECK(is_extension_of(p, r.extension));
    }
  }
  SECTION("uniform importance forced along b,a,d,c gives the Knuth product 8") {
    ScriptedChooser script({1, 0, 3, 2}, p.size());
    const SampleResult r = single_estimate_with(p, ImportanceSpec::uniform(), script);
    CHECK(r.extension == Extension{1, 0, 3, 2});
    CHECK_THAT(r.estimate.value(), WithinRel(8.0, 1e-12));
  }
  SECTION("general importance forced along b,a,d,c matches the closed form") {
    const std::vector<double> w = {0.7, 1.9, 0.4, 2.2};  // a, b, c, d
    ScriptedChooser script({1, 0, 3, 2}, p.size());
    const SampleResult r =
        single_estimate_with(p, ImportanceSpec::table_weights(w), script);
    const double want =
        ((w[0] + w[1]) / w[1]) * ((w[0] + w[3]) / w[0]) * ((w[2] + w[3]) / w[3]);
    CHECK_THAT(r.estimate.value(), WithinRel(want, 1e-12));
  }
  SECTION("empty poset throws") {
    Poset q = chain(1);
    q.delete_element(0);
    SplitMix64 rng(0);
    CHECK_THROWS_AS(single_estimate(q, ImportanceSpec::uniform(), rng),
                    EmptyPosetError);
  }
}

TEST_CASE("scripted single_estimate agrees with the extension replay") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Poset p = random_poset(8, 0.3, seed);
    SplitMix64 rng(seed + 1000);
    const Extension ext = single_estimate(p, ImportanceSpec::uniform(), rng).extension;
    for (const ImportanceSpec& spec :
         {ImportanceSpec::uniform(), ImportanceSpec::descendants(),
          ImportanceSpec::asq()}) {
      ScriptedChooser script(ext, p.size());
      const SampleResult forced = single_estimate_with(p, spec, script);
      REQUIRE(forced.extension == ext);
      CHECK_THAT(forced.estimate.log_value,
                 WithinAbs(log_estimate_for_extension(p, spec, ext), 1e-12));
    }
  }
}

TEST_CASE("unbiasedness of the single-estimate walk by exhaustion") {
  const std::vector<ImportanceSpec> specs = {
      ImportanceSpec::uniform(), ImportanceSpec::descendants(),
      ImportanceSpec::asq(), ImportanceSpec::table_weights({1.5, 0.3, 2.0, 0.9, 1.1, 0.6})};
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Poset p = random_poset(3 + int(seed % 4), 0.35, seed);
    const double want = double(exact_count(p));
    for (const ImportanceSpec& spec : specs) {
      const auto res = exhaust_choice_tree([&](auto chooser) {
        return single_estimate_with(p, spec, chooser).estimate.log_value;
      });
      CHECK_THAT(res.total_probability, WithinAbs(1.0, 1e-9));
      CHECK_THAT(res.expectation, WithinRel(want, 1e-9));
    }
  }
  SECTION("still exact at sizes 9 and 10") {
    const std::vector<ImportanceSpec> wide = {
        ImportanceSpec::uniform(), ImportanceSpec::descendants(), ImportanceSpec::asq()};
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const Poset p = random_poset(9 + int(seed % 2), 0.4, seed * 5 + 11);
      const double want = double(exact_count(p));
      for (const ImportanceSpec& spec : wide) {
        const auto res = exhaust_choice_tree([&](auto chooser) {
          return single_estimate_with(p, spec, chooser).estimate.log_value;
        });
        CHECK_THAT(res.total_probability, WithinAbs(1.0, 1e-9));
        CHECK_THAT(res.expectation, WithinRel(want, 1e-9));
        CHECK(res.leaves == std::size_t(exact_count(p)));
      }
    }
  }
}

TEST_CASE("estimates never fall below 1") {
  // each factor r(S)/r(v) is at least 1, so log estimates are nonnegative
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const Poset p = random_poset(3 + int(seed % 10), 0.25, seed * 97 + 1);
    for (const ImportanceSpec& spec :
         {ImportanceSpec::uniform(), ImportanceSpec::descendants(),
          ImportanceSpec::asq()}) {
      SplitMix64 rng(seed);
      CHECK(single_estimate(p, spec, rng).estimate.log_value >= -1e-12);
      CHECK(recursive_estimate(p, spec, rng).log_value >= -1e-12);
    }
  }
}

TEST_CASE("selection probability is the reciprocal of the estimate") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Poset p = random_poset(7, 0.25, seed);
    for (const ImportanceSpec& spec :
         {ImportanceSpec::descendants(), ImportanceSpec::asq()}) {
      SplitMix64 rng(seed);
      const Extension ext = single_estimate(p, spec, rng).extension;
      const ReplayResult r = replay_extension(p, spec, ext);
      CHECK_THAT(r.log_probability, WithinAbs(-r.log_estimate, 1e-12));
    }
  }
}

TEST_CASE("uniform spec degenerates to the Knuth estimator") {
  // per-step factor must equal the current maximal-set size
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Poset p = random_poset(8, 0.3, seed);
    SplitMix64 rng(seed);
    const Extension ext = single_estimate(p, ImportanceSpec::uniform(), rng).extension;
    double log_knuth = 0.0;
    Poset work = p;
    for (int v : ext) {
      log_knuth += std::log(double(work.maximal_elements().size()));
      work.delete_element(v);
    }
    CHECK_THAT(log_estimate_for_extension(p, ImportanceSpec::uniform(), ext),
               WithinAbs(log_knuth, 1e-12));
  }
}

TEST_CASE("recursive_estimate") {
  SECTION("two disjoint 2-chains always estimate exactly 6") {
    const Poset p = Poset::from_relations(4, {{0, 1}, {2, 3}});
    for (const ImportanceSpec& spec :
         {ImportanceSpec::uniform(), ImportanceSpec::descendants(),
          ImportanceSpec::asq()}) {
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        SplitMix64 rng(seed);
        CHECK_THAT(recursive_estimate(p, spec, rng).value(), WithinRel(6.0, 1e-12));
      }
    }
  }
  SECTION("singleton estimates 1") {
    SplitMix64 rng(0);
    CHECK(recursive_estimate(chain(1), ImportanceSpec::asq(), rng).value() == 1.0);
  }
  SECTION("antichain estimates n! with zero variance") {
    const Poset p = antichain(6);
    double first = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      SplitMix64 rng(seed);
      const double v = recursive_estimate(p, ImportanceSpec::uniform(), rng).value();
      if (seed == 0) first = v;
      CHECK(v == first);  // bitwise: the walk takes no random branch
      CHECK_THAT(v, WithinRel(720.0, 1e-12));
    }
  }
  SECTION("empty poset throws") {
    Poset q = chain(1);
    q.delete_element(0);
    SplitMix64 rng(0);
    CHECK_THROWS_AS(recursive_estimate(q, ImportanceSpec::uniform(), rng),
                    EmptyPosetError);
  }
}

TEST_CASE("unbiasedness of the recursive walk by exhaustion") {
  const std::vector<ImportanceSpec> specs = {
      ImportanceSpec::uniform(), ImportanceSpec::descendants(), ImportanceSpec::asq()};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Poset p = random_poset(3 + int(seed % 6), 0.2, seed * 31 + 2);
    const double want = double(exact_count(p));
    for (const ImportanceSpec& spec : specs) {
      const auto res = exhaust_choice_tree([&](auto chooser) {
        return recursive_estimate_with(p, spec, chooser).log_value;
      });
      CHECK_THAT(res.total_probability, WithinAbs(1.0, 1e-9));
      CHECK_THAT(res.expectation, WithinRel(want, 1e-9));
    }
  }
}

TEST_CASE("lower bound") {
  CHECK_THAT(log_count_lower_bound(n_poset()), WithinAbs(std::log(4.0), 1e-12));
  CHECK_THAT(log_count_lower_bound(chain(9)), WithinAbs(0.0, 1e-9));
  CHECK_THAT(log_count_lower_bound(antichain(7)),
             WithinAbs(std::log(5040.0), 1e-9));
  SECTION("bounds every descendants-importance sample and the count") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const Poset p = random_poset(10, 0.25, seed);
      const double lb = log_count_lower_bound(p);
      CHECK(lb <= std::log(double(exact_count(p))) + 1e-9);
      for (std::uint64_t s = 0; s < 8; ++s) {
        SplitMix64 rng(seed * 100 + s);
        CHECK(lb <= single_estimate(p, ImportanceSpec::descendants(), rng)
                            .estimate.log_value +
                        1e-9);
      }
    }
  }
}

TEST_CASE("sample_with_forest") {
  SECTION("n_poset forced along b,a,d,c collects parents a->c, b->d") {
    ScriptedChooser script({1, 0, 3, 2}, 4);
    const ForestSample s =
        sample_with_forest_with(n_poset(), ImportanceSpec::descendants(), script);
    CHECK(s.forest.parent == std::vector<int>{-1, -1, 0, 1});
    CHECK_THAT(std::exp(s.log_upper_bound), WithinRel(6.0, 1e-12));
  }
  SECTION("upper bound dominates the exact count") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const Poset p = random_poset(10, 0.3, seed);
      const double log_exact = std::log(double(exact_count(p)));
      for (std::uint64_t s = 0; s < 6; ++s) {
        SplitMix64 rng(seed * 57 + s);
        const ForestSample fs = sample_with_forest(p, ImportanceSpec::descendants(), rng);
        CHECK(fs.log_upper_bound >= log_exact - 1e-9);
        // parent links point upward in the original order
        for (int v = 0; v < p.size(); ++v)
          if (fs.forest.parent[std::size_t(v)] >= 0)
            CHECK(p.greater(fs.forest.parent[std::size_t(v)], v));
      }
    }
  }
  SECTION("on a forest the collected forest is the reduction and the bound is exact") {
    SplitMix64 rng(31337);
    for (int rep = 0; rep < 10; ++rep) {
      const Poset f = testing::random_forest(9, rng);
      std::vector<int> cover_parent(std::size_t(f.size()), -1);
      for (auto [u, v] : f.transitive_reduction().edges)
        cover_parent[std::size_t(v)] = u;
      SplitMix64 sample_rng(rng.next());
      const ForestSample fs =
          sample_with_forest(f, ImportanceSpec::descendants(), sample_rng);
      CHECK(fs.forest.parent == cover_parent);
      CHECK_THAT(fs.log_upper_bound,
                 WithinAbs(std::log(double(forest_count(f))), 1e-9));
    }
  }
}

TEST_CASE("forest samples hit the closed-form count exactly") {
  SplitMix64 rng(8080);
  for (int rep = 0; rep < 12; ++rep) {
    const Poset f = testing::random_forest(10, rng);
    const double want = double(forest_count(f));
    for (std::uint64_t s = 0; s < 6; ++s) {
      SplitMix64 sample_rng(derive_seed(1234, std::uint64_t(rep), s));
      const SampleResult r = single_estimate(f, ImportanceSpec::descendants(), sample_rng);
      CHECK_THAT(r.estimate.value(), WithinRel(want, 1e-9));
    }
    const BatchStats st = run_batch(f, ImportanceSpec::descendants(), 200, 5);
    CHECK(st.relative_variance <= 1e-12);
  }
}

TEST_CASE("run_batch") {
  SECTION("chain: mean exactly 1, relative variance exactly 0") {
    const BatchStats st = run_batch(chain(12), ImportanceSpec::asq(), 500, 9);
    CHECK(st.mean_estimate == 1.0);
    CHECK(st.relative_variance == 0.0);
    CHECK(st.min_log_estimate == 0.0);
    CHECK(st.max_log_estimate == 0.0);
  }
  SECTION("n_poset with descendants importance: zero-variance mean 5") {
    const BatchStats st = run_batch(n_poset(), ImportanceSpec::descendants(), 300, 17);
    CHECK_THAT(st.mean_estimate, WithinRel(5.0, 1e-12));
    CHECK(st.relative_variance <= 1e-12);
  }
  SECTION("n_poset uniform batch converges to count 5 and RV 3/25") {
    const std::int64_t k = 100000;
    const BatchStats st = run_batch(n_poset(), ImportanceSpec::uniform(), k, 21);
    const double se = st.mean_estimate * std::sqrt(st.relative_variance / double(k));
    CHECK(std::abs(st.mean_estimate - 5.0) <= 3.0 * se);
    CHECK_THAT(st.relative_variance, WithinRel(0.12, 0.10));
  }
  SECTION("deterministic and schedule-independent") {
    const Poset p = random_poset(12, 0.2, 5);
    const BatchStats a = run_batch(p, ImportanceSpec::asq(), 400, 77, true, 1);
    const BatchStats b = run_batch(p, ImportanceSpec::asq(), 400, 77, true, 4);
    CHECK(a.mean_estimate == b.mean_estimate);
    CHECK(a.log_mean_estimate == b.log_mean_estimate);
    CHECK(a.relative_variance == b.relative_variance);
    CHECK(a.min_log_estimate == b.min_log_estimate);
    CHECK(a.max_log_estimate == b.max_log_estimate);
  }
  SECTION("argument checks") {
    CHECK_THROWS_AS(run_batch(n_poset(), ImportanceSpec::uniform(), 0, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("sample_forest_extension_uniform") {
  SECTION("rejects non-forests") {
    SplitMix64 rng(0);
    CHECK_THROWS_AS(sample_forest_extension_uniform(n_poset(), rng), NotForestError);
  }
  SECTION("chain always yields its unique extension") {
    SplitMix64 rng(3);
    CHECK(sample_forest_extension_uniform(chain(6), rng) ==
          Extension{0, 1, 2, 3, 4, 5});
  }
  SECTION("2-antichain is a fair coin") {
    SplitMix64 rng(1);
    int first = 0;
    const int draws = 4000;
    for (int i = 0; i < draws; ++i)
      if (sample_forest_extension_uniform(antichain(2), rng)[0] == 0) ++first;
    CHECK(std::abs(first - draws / 2) < 200);  // ~6 sigma
  }
}
