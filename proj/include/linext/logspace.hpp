#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace linext {

// log(n!)
inline double log_factorial(int n) { return std::lgamma(double(n) + 1.0); }

// log(total! / (sizes[0]! * sizes[1]! * ...))
inline double log_multinomial(int total, std::span<const int> sizes) {
  double r = log_factorial(total);
  for (int s : sizes) r -= log_factorial(s);
  return r;
}

// log(sum_i exp(scale * x_i)), stable. Requires a nonempty range.
inline double logsumexp_scaled(std::span<const double> xs, double scale) {
  double m = xs.front() * scale;
  for (double x : xs) m = std::max(m, x * scale);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x * scale - m);
  return m + std::log(s);
}

inline double logsumexp(std::span<const double> xs) {
  return logsumexp_scaled(xs, 1.0);
}

}  // namespace linext
