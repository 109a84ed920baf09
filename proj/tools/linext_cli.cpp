// linext command-line front end: poset generation and I/O, SIS estimation,
// exact counting, variance reports, and the randomized benchmark.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "linext/linext.hpp"

namespace {

using linext::detail::format_g17;

struct GenerateArgs {
  int n = 0;
  double edge_prob = 0.2;
  std::uint64_t seed = 1;
  std::string out;
};

struct EstimateArgs {
  std::string path;
  std::string spec = "desc";
  std::int64_t samples = 1000;
  std::uint64_t seed = 1;
  bool recursive = false;
  int threads = 1;
};

struct ExactArgs {
  std::string path;
  int limit = linext::kDefaultExactLimit;
};

struct RvArgs {
  std::string path;
  std::string spec = "uniform";
};

struct ExperimentArgs {
  std::vector<int> n_values = {10, 15, 20, 25, 30, 35, 40};
  double edge_prob = 0.2;
  int posets_per_n = 64;
  std::int64_t samples = 256;
  std::vector<std::string> specs = {"uniform", "desc", "asq"};
  std::vector<int> recursive = {0, 1};
  std::uint64_t seed = 1;
  bool paper_scale = false;
  std::string out = "experiment.csv";
  int threads = 1;
  bool n_values_given = false;
};

void cmd_generate(const GenerateArgs& a) {
  linext::save_poset(linext::random_poset(a.n, a.edge_prob, a.seed), a.out);
}

void cmd_estimate(const EstimateArgs& a) {
  const linext::Poset p = linext::load_poset(a.path);
  const linext::ImportanceSpec spec{linext::parse_importance_kind(a.spec), {}};

  linext::BatchStats stats;
  bool have_upper = false;
  double best_log_upper = 0.0;
  if (spec.kind == linext::ImportanceKind::Descendants && !a.recursive) {
    // Track the spanning-forest upper bound alongside the estimates; the
    // walk consumes randomness identically to run_batch.
    std::vector<double> logs(std::size_t(a.samples)), uppers(std::size_t(a.samples));
    linext::detail::parallel_chunks(a.samples, a.threads,
                                    [&](std::int64_t i0, std::int64_t i1) {
      for (std::int64_t i = i0; i < i1; ++i) {
        linext::SplitMix64 rng(linext::derive_seed(a.seed, std::uint64_t(i)));
        const linext::ForestSample s = linext::sample_with_forest(p, spec, rng);
        logs[std::size_t(i)] = s.estimate.log_value;
        uppers[std::size_t(i)] = s.log_upper_bound;
      }
    });
    stats = linext::stats_from_log_samples(logs);
    best_log_upper = uppers[0];
    for (double u : uppers) best_log_upper = std::min(best_log_upper, u);
    have_upper = true;
  } else {
    stats = linext::run_batch(p, spec, a.samples, a.seed, a.recursive, a.threads);
  }

  std::printf("poset: %s\n", a.path.c_str());
  std::printf("n: %d\n", p.alive_count());
  std::printf("spec: %s\n", linext::kind_name(spec.kind));
  std::printf("algorithm: %s\n", a.recursive ? "recursive" : "single");
  std::printf("samples: %" PRId64 "\n", stats.samples);
  std::printf("mean_estimate: %s\n", format_g17(stats.mean_estimate).c_str());
  std::printf("log_mean_estimate: %s\n", format_g17(stats.log_mean_estimate).c_str());
  std::printf("relative_variance: %s\n", format_g17(stats.relative_variance).c_str());
  if (spec.kind == linext::ImportanceKind::Descendants) {
    const double lb = linext::log_count_lower_bound(p);
    std::printf("log_lower_bound: %s\n", format_g17(lb).c_str());
    std::printf("lower_bound: %s\n", format_g17(std::exp(lb)).c_str());
  }
  if (have_upper) {
    std::printf("best_log_upper_bound: %s\n", format_g17(best_log_upper).c_str());
    std::printf("best_upper_bound: %s\n", format_g17(std::exp(best_log_upper)).c_str());
  }
}

void cmd_exact(const ExactArgs& a) {
  const linext::Poset p = linext::load_poset(a.path);
  std::printf("%s\n", linext::exact_count(p, a.limit).str().c_str());
}

void cmd_rv(const RvArgs& a) {
  const linext::Poset p = linext::load_poset(a.path);
  const linext::ImportanceSpec spec{linext::parse_importance_kind(a.spec), {}};
  const double e = linext::rv_explicit(p, spec);
  const double r = linext::rv_recursive(p, spec);
  std::printf("rv_explicit: %s\n", format_g17(e).c_str());
  std::printf("rv_recursive: %s\n", format_g17(r).c_str());
  std::printf("difference: %s\n", format_g17(std::abs(e - r)).c_str());
}

void cmd_experiment(const ExperimentArgs& a) {
  linext::ExperimentConfig cfg;
  cfg.n_values = a.n_values;
  if (a.paper_scale && !a.n_values_given) {
    cfg.n_values.clear();
    for (int n = 10; n <= 150; n += 5) cfg.n_values.push_back(n);
  }
  cfg.edge_prob = a.edge_prob;
  cfg.posets_per_n = a.posets_per_n;
  cfg.samples_per_poset = a.samples;
  cfg.specs.clear();
  for (const std::string& s : a.specs)
    cfg.specs.push_back(linext::parse_importance_kind(s));
  cfg.recursive_modes.clear();
  for (int r : a.recursive) {
    if (r != 0 && r != 1)
      throw linext::DomainError("--recursive entries must be 0 or 1");
    cfg.recursive_modes.push_back(r == 1);
  }
  cfg.master_seed = a.seed;
  cfg.paper_scale = a.paper_scale;
  cfg.threads = a.threads;

  if (a.paper_scale)
    std::fprintf(stderr,
                 "warning: --paper-scale runs n^2 posets x n^2 samples per size; "
                 "expect hours of CPU time\n");

  const linext::ExperimentResult result = linext::run_experiment(cfg);
  linext::write_experiment_csv(a.out, result);
  std::fprintf(stderr, "wrote %s and %s\n", a.out.c_str(),
               linext::summary_path_for(a.out).c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linext: count and estimate linear extensions of posets"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate", "Write a random poset file");
  cmd_gen->add_option("--n", gen.n, "Number of elements")->required();
  cmd_gen->add_option("--edge-prob", gen.edge_prob, "Relation probability")
      ->capture_default_str();
  cmd_gen->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  cmd_gen->add_option("--out", gen.out, "Output .poset path")->required();
  cmd_gen->callback([&] { cmd_generate(gen); });

  EstimateArgs est;
  auto* cmd_est = app.add_subcommand("estimate", "SIS estimate of the extension count");
  cmd_est->add_option("poset", est.path, "Input .poset file")->required();
  cmd_est->add_option("--spec", est.spec, "Importance function: uniform|desc|asq")
      ->capture_default_str();
  cmd_est->add_option("--samples", est.samples, "Sample count")->capture_default_str();
  cmd_est->add_option("--seed", est.seed, "RNG seed")->capture_default_str();
  cmd_est->add_flag("--recursive", est.recursive,
                    "Use the recursive connected-components algorithm");
  cmd_est->add_option("--threads", est.threads, "Worker threads (0 = auto)")
      ->capture_default_str();
  cmd_est->callback([&] { cmd_estimate(est); });

  ExactArgs exa;
  auto* cmd_exa = app.add_subcommand("exact", "Exact extension count (small posets)");
  cmd_exa->add_option("poset", exa.path, "Input .poset file")->required();
  cmd_exa->add_option("--limit", exa.limit, "Maximum element count")
      ->capture_default_str();
  cmd_exa->callback([&] { cmd_exact(exa); });

  RvArgs rv;
  auto* cmd_rv_sub = app.add_subcommand("rv", "Exact relative variance of the estimator");
  cmd_rv_sub->add_option("poset", rv.path, "Input .poset file")->required();
  cmd_rv_sub->add_option("--spec", rv.spec, "Importance function: uniform|desc|asq")
      ->capture_default_str();
  cmd_rv_sub->callback([&] { cmd_rv(rv); });

  ExperimentArgs exp;
  auto* cmd_exp = app.add_subcommand("experiment", "Random-poset variance benchmark");
  auto* nv = cmd_exp->add_option("--n-values", exp.n_values, "Poset sizes")
                 ->delimiter(',')
                 ->capture_default_str();
  cmd_exp->add_option("--edge-prob", exp.edge_prob, "Relation probability")
      ->capture_default_str();
  cmd_exp->add_option("--posets-per-n", exp.posets_per_n, "Posets per size")
      ->capture_default_str();
  cmd_exp->add_option("--samples", exp.samples, "Samples per poset")
      ->capture_default_str();
  cmd_exp->add_option("--spec", exp.specs, "Importance functions to run")
      ->delimiter(',')
      ->capture_default_str();
  cmd_exp->add_option("--recursive", exp.recursive,
                      "Algorithm modes to run (0 = single, 1 = recursive)")
      ->delimiter(',')
      ->capture_default_str();
  cmd_exp->add_option("--seed", exp.seed, "Master seed")->capture_default_str();
  cmd_exp->add_flag("--paper-scale", exp.paper_scale,
                    "Full-scale preset: sizes 10..150, n^2 posets and samples");
  cmd_exp->add_option("--out", exp.out, "Rows CSV path (summary written alongside)")
      ->capture_default_str();
  cmd_exp->add_option("--threads", exp.threads, "Worker threads (0 = auto)")
      ->capture_default_str();
  cmd_exp->callback([&] {
    exp.n_values_given = nv->count() > 0;
    cmd_experiment(exp);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const linext::SizeLimitError& e) {
    std::fprintf(stderr, "error: %s\n(use 'estimate' for posets beyond exact limits)\n",
                 e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
