#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "linext/errors.hpp"
#include "linext/poset.hpp"

namespace linext {

// .poset text format: first significant line is the element count n, each
// further significant line is "u v" meaning u > v (0-based). '#' starts a
// comment; blank lines are ignored. The loader transitively completes the
// relation and rejects cycles.

namespace detail {

inline std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

inline bool parse_int(const std::string& token, long long& out) {
  try {
    std::size_t used = 0;
    out = std::stoll(token, &used);
    return used == token.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace detail

inline Poset parse_poset(std::istream& in, const std::string& source = "<stream>") {
  std::string line;
  int lineno = 0;
  long long n = -1;
  std::vector<std::pair<int, int>> relations;
  auto fail = [&](const std::string& what) {
    throw PosetParseError(source + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(detail::strip_comment(line));
    std::string a, b, extra;
    if (!(fields >> a)) continue;  // blank or comment-only line
    if (n < 0) {
      if (!detail::parse_int(a, n) || n < 0)
        fail("expected a nonnegative element count, got '" + a + "'");
      if (fields >> extra) fail("unexpected token after element count");
      continue;
    }
    long long u = 0, v = 0;
    if (!(fields >> b)) fail("expected 'u v', got a single token");
    if (fields >> extra) fail("unexpected token '" + extra + "' after relation");
    if (!detail::parse_int(a, u) || !detail::parse_int(b, v))
      fail("expected integer element indices, got '" + a + " " + b + "'");
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw IndexError(source + ":" + std::to_string(lineno) + ": element index out of range 0.." +
                       std::to_string(n - 1));
    relations.emplace_back(int(u), int(v));
  }
  if (n < 0) {
    lineno = 1;
    fail("missing element count line");
  }
  return Poset::from_relations(int(n), relations);
}

inline Poset load_poset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PosetParseError(path + ": cannot open file");
  return parse_poset(in, path);
}

/// Writes the cover relations (the closure is rebuilt on load). Output is
/// deterministic: edges in ascending (u, v) order.
inline void write_poset(std::ostream& out, const Poset& p) {
  out << p.size() << "\n";
  for (auto [u, v] : p.transitive_reduction().edges) out << u << " " << v << "\n";
}

inline void save_poset(const Poset& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  write_poset(out, p);
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace linext
