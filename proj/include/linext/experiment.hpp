#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "linext/errors.hpp"
#include "linext/importance.hpp"
#include "linext/parallel.hpp"
#include "linext/poset.hpp"
#include "linext/rng.hpp"
#include "linext/sis.hpp"

namespace linext {

// Randomized benchmark over upper-triangular random posets: for each size n,
// generate posets_per_n posets (relation probability edge_prob, transitively
// completed), run a batch per (importance spec, algorithm) cell, and record
// the per-poset relative variance. Seeds form a tree: poset seed =
// derive_seed(master_seed, n, poset_index), sample i inside a batch uses
// derive_seed(poset_seed, i). Everything is a pure function of the config.
struct ExperimentConfig {
  std::vector<int> n_values = {10, 15, 20, 25, 30, 35, 40};
  double edge_prob = 0.2;
  int posets_per_n = 64;
  std::int64_t samples_per_poset = 256;
  std::vector<ImportanceKind> specs = {ImportanceKind::Uniform,
                                       ImportanceKind::Descendants,
                                       ImportanceKind::Asq};
  std::vector<bool> recursive_modes = {false, true};
  std::uint64_t master_seed = 1;
  bool paper_scale = false;  // per-n poset and sample counts become n^2
  int threads = 1;
};

struct ExperimentRow {
  int n = 0;
  ImportanceKind spec = ImportanceKind::Uniform;
  bool recursive = false;
  int poset_index = 0;
  std::uint64_t seed = 0;  // the per-poset seed
  std::int64_t samples = 0;
  double mean_log_estimate = 0.0;  // natural log of the batch mean estimate
  double relative_variance = 0.0;
};

struct SummaryRow {
  int n = 0;
  ImportanceKind spec = ImportanceKind::Uniform;
  bool recursive = false;
  double mean_relative_variance = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<SummaryRow> summary;
};

namespace detail {

inline std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.n_values.empty()) throw DomainError("experiment: no poset sizes given");
  for (int n : cfg.n_values)
    if (n < 1) throw DomainError("experiment: poset sizes must be >= 1");
  if (!(cfg.edge_prob >= 0.0 && cfg.edge_prob <= 1.0))
    throw DomainError("experiment: edge_prob must be in [0, 1]");
  if (cfg.posets_per_n < 1 || cfg.samples_per_poset < 1)
    throw DomainError("experiment: poset and sample counts must be >= 1");
  if (cfg.specs.empty() || cfg.recursive_modes.empty())
    throw DomainError("experiment: need at least one spec and one algorithm mode");

  auto posets_for = [&](int n) { return cfg.paper_scale ? n * n : cfg.posets_per_n; };
  auto samples_for = [&](int n) {
    return cfg.paper_scale ? std::int64_t(n) * n : cfg.samples_per_poset;
  };

  // Flatten (n, poset) work items; each computes all cells of one poset.
  struct Item {
    int n_idx;
    int poset_idx;
    std::size_t row_base;
  };
  std::vector<Item> items;
  std::size_t total_rows = 0;
  const std::size_t cells = cfg.specs.size() * cfg.recursive_modes.size();
  for (int ni = 0; ni < int(cfg.n_values.size()); ++ni)
    for (int pi = 0; pi < posets_for(cfg.n_values[std::size_t(ni)]); ++pi) {
      items.push_back({ni, pi, total_rows});
      total_rows += cells;
    }

  ExperimentResult result;
  result.rows.resize(total_rows);
  detail::parallel_chunks(std::int64_t(items.size()), cfg.threads,
                          [&](std::int64_t i0, std::int64_t i1) {
    for (std::int64_t it = i0; it < i1; ++it) {
      const Item& item = items[std::size_t(it)];
      const int n = cfg.n_values[std::size_t(item.n_idx)];
      const std::uint64_t poset_seed =
          derive_seed(cfg.master_seed, std::uint64_t(n), std::uint64_t(item.poset_idx));
      const Poset p = random_poset(n, cfg.edge_prob, poset_seed);
      std::size_t slot = item.row_base;
      for (ImportanceKind kind : cfg.specs) {
        const ImportanceSpec spec{kind, {}};
        for (bool recursive : cfg.recursive_modes) {
          const BatchStats st =
              run_batch(p, spec, samples_for(n), poset_seed, recursive, 1);
          result.rows[slot++] = {n,          kind,
                                 recursive,  item.poset_idx,
                                 poset_seed, st.samples,
                                 st.log_mean_estimate, st.relative_variance};
        }
      }
    }
  });

  // Per-(n, spec, recursive) mean relative variance, in config order.
  std::map<std::tuple<int, int, int>, std::pair<double, std::int64_t>> acc;
  for (const ExperimentRow& row : result.rows) {
    auto& slot = acc[{row.n, int(row.spec), int(row.recursive)}];
    slot.first += row.relative_variance;
    slot.second += 1;
  }
  for (int n : cfg.n_values)
    for (ImportanceKind kind : cfg.specs)
      for (bool recursive : cfg.recursive_modes) {
        const auto& slot = acc.at({n, int(kind), int(recursive)});
        result.summary.push_back({n, kind, recursive, slot.first / double(slot.second)});
      }
  return result;
}

inline constexpr const char* kRowsCsvHeader =
    "n,spec,recursive,poset_index,seed,samples,mean_log_estimate,relative_variance";
inline constexpr const char* kSummaryCsvHeader = "n,spec,recursive,mean_relative_variance";

inline std::string rows_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = kRowsCsvHeader;
  out += '\n';
  for (const ExperimentRow& r : rows) {
    out += std::to_string(r.n);
    out += ',';
    out += kind_name(r.spec);
    out += ',';
    out += r.recursive ? '1' : '0';
    out += ',';
    out += std::to_string(r.poset_index);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.samples);
    out += ',';
    out += detail::format_g17(r.mean_log_estimate);
    out += ',';
    out += detail::format_g17(r.relative_variance);
    out += '\n';
  }
  return out;
}

inline std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = kSummaryCsvHeader;
  out += '\n';
  for (const SummaryRow& r : rows) {
    out += std::to_string(r.n);
    out += ',';
    out += kind_name(r.spec);
    out += ',';
    out += r.recursive ? '1' : '0';
    out += ',';
    out += detail::format_g17(r.mean_relative_variance);
    out += '\n';
  }
  return out;
}

/// Companion summary path: results.csv -> results_summary.csv.
inline std::string summary_path_for(const std::string& rows_path) {
  const std::string suffix = ".csv";
  if (rows_path.size() > suffix.size() &&
      rows_path.compare(rows_path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return rows_path.substr(0, rows_path.size() - suffix.size()) + "_summary.csv";
  return rows_path + "_summary.csv";
}

/// Writes via a temporary file and renames into place, so a failed run never
/// leaves a partial CSV behind.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  try {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(tmp + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error(tmp + ": write failed");
    out.close();
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

inline void write_experiment_csv(const std::string& rows_path,
                                 const ExperimentResult& result) {
  write_file_atomic(rows_path, rows_csv(result.rows));
  write_file_atomic(summary_path_for(rows_path), summary_csv(result.summary));
}

}  // namespace linext
