#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "linext/errors.hpp"

namespace linext {

enum class ImportanceKind {
  Uniform,      // r(v) = 1: plain Knuth tree estimation
  Descendants,  // r(v) = d(v)
  Asq,          // r(v) = (i + d(v) - 1) / (i - d(v) + 1), available spaces quotient
  Table,        // explicit per-element weights (testing hook)
};

struct ImportanceSpec {
  ImportanceKind kind = ImportanceKind::Uniform;
  std::vector<double> table;  // used only when kind == Table

  static ImportanceSpec uniform() { return {ImportanceKind::Uniform, {}}; }
  static ImportanceSpec descendants() { return {ImportanceKind::Descendants, {}}; }
  static ImportanceSpec asq() { return {ImportanceKind::Asq, {}}; }
  static ImportanceSpec table_weights(std::vector<double> weights) {
    return {ImportanceKind::Table, std::move(weights)};
  }
};

/// Importance of element v with d_v descendants when `remaining` elements are
/// still unplaced in the structure being sequenced. Requires 1 <= d_v <=
/// remaining; always strictly positive.
inline double importance(const ImportanceSpec& spec, int v, int d_v, int remaining) {
  if (d_v < 1 || d_v > remaining)
    throw DomainError("importance: need 1 <= d(v) <= remaining, got d=" +
                      std::to_string(d_v) + " remaining=" + std::to_string(remaining));
  switch (spec.kind) {
    case ImportanceKind::Uniform:
      return 1.0;
    case ImportanceKind::Descendants:
      return double(d_v);
    case ImportanceKind::Asq:
      return double(remaining + d_v - 1) / double(remaining - d_v + 1);
    case ImportanceKind::Table: {
      if (v < 0 || std::size_t(v) >= spec.table.size())
        throw DomainError("importance: no table weight for element " + std::to_string(v));
      const double w = spec.table[std::size_t(v)];
      if (!(w > 0.0) || !std::isfinite(w))
        throw DomainError("importance: table weight for element " + std::to_string(v) +
                          " is not strictly positive");
      return w;
    }
  }
  throw DomainError("importance: unknown importance kind");
}

inline const char* kind_name(ImportanceKind k) {
  switch (k) {
    case ImportanceKind::Uniform: return "uniform";
    case ImportanceKind::Descendants: return "desc";
    case ImportanceKind::Asq: return "asq";
    case ImportanceKind::Table: return "table";
  }
  return "?";
}

/// Parses the CLI spelling of an importance kind; Table is not accepted (it
/// has no file syntax and exists for tests).
inline ImportanceKind parse_importance_kind(const std::string& name) {
  if (name == "uniform") return ImportanceKind::Uniform;
  if (name == "desc" || name == "descendants") return ImportanceKind::Descendants;
  if (name == "asq") return ImportanceKind::Asq;
  throw DomainError("unknown importance spec '" + name + "' (use uniform|desc|asq)");
}

}  // namespace linext
