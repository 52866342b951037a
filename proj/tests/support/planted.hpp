#pragma once

// Test-only oracles: distributions with a prescribed ED, built directly from
// the definition without going through the library's metric code.

#include <cmath>
#include <cstddef>
#include <vector>

namespace edprof::testing {

// Naive entropy, -sum p ln p with 0 ln 0 = 0, straight left-to-right loop.
inline double naive_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

inline double naive_ed(const std::vector<double>& p) {
  return 1.0 - naive_entropy(p) / std::log(static_cast<double>(p.size()));
}

// Two-point distribution (w, 1 - w, 0, ..., 0) over V tokens.
inline std::vector<double> two_point(double w, std::size_t vocab) {
  std::vector<double> p(vocab, 0.0);
  p[0] = w;
  p[1] = 1.0 - w;
  return p;
}

// Bisection on w in [1/2, 1] so that the two-point distribution has the target
// ED. Reachable targets: [1 - ln 2 / ln V, 1].
inline std::vector<double> two_point_with_ed(double target, std::size_t vocab) {
  double lo = 0.5, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (naive_ed(two_point(mid, vocab)) < target) lo = mid; else hi = mid;
  }
  return two_point(0.5 * (lo + hi), vocab);
}

// One token with mass q, the rest sharing 1 - q evenly. Any target ED in
// [0, 1) is reachable; bisection on q in [1/V, 1].
inline std::vector<double> hot_token(double q, std::size_t vocab) {
  std::vector<double> p(vocab, (1.0 - q) / static_cast<double>(vocab - 1));
  p[0] = q;
  return p;
}

inline std::vector<double> hot_token_with_ed(double target, std::size_t vocab) {
  double lo = 1.0 / static_cast<double>(vocab), hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (naive_ed(hot_token(mid, vocab)) < target) lo = mid; else hi = mid;
  }
  return hot_token(0.5 * (lo + hi), vocab);
}

}  // namespace edprof::testing
