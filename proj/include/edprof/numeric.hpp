#pragma once

#include <cstddef>

namespace edprof {

// Pairwise (cascade) summation of term(i) for i in [first, last). Error grows
// as O(log n) rather than O(n); accumulation is always in double.
template <class Term>
double pairwise_sum(std::size_t first, std::size_t last, const Term& term) {
  constexpr std::size_t kLeaf = 128;
  const std::size_t n = last - first;
  if (n <= kLeaf) {
    double s = 0.0;
    for (std::size_t i = first; i < last; ++i) s += term(i);
    return s;
  }
  const std::size_t mid = first + n / 2;
  return pairwise_sum(first, mid, term) + pairwise_sum(mid, last, term);
}

template <class Term>
double pairwise_sum(std::size_t n, const Term& term) {
  return pairwise_sum(std::size_t{0}, n, term);
}

}  // namespace edprof
