#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "lf/grid.hpp"

namespace lf::grid::detail {

inline int mod(int a, int n) { return ((a % n) + n) % n; }

// Calls f(r1, r2, o_count) for every empty rectangle avoiding X that starts at x;
// the target generator is x with rows r1 and r2 exchanged.
template <class F>
void for_each_rectangle(const GridDiagram& g, const GridGenerator& x, F&& f) {
  const int N = g.N;
  for (int r1 = 0; r1 < N; ++r1) {
    const int a = x[r1];
    int limit = N - 1;
    for (int h = 1; h < N && limit > 0; ++h) {
      int last = (r1 + h - 1) % N;
      limit = std::min(limit, mod(g.X[last] - a, N));
      if (h >= 2) limit = std::min(limit, mod(x[last] - a, N));
      if (limit == 0) break;
      int r2 = (r1 + h) % N;
      int w = mod(x[r2] - a, N);
      if (w > limit) continue;
      int os = 0;
      for (int k = 0; k < h; ++k)
        if (mod(g.O[(r1 + k) % N] - a, N) < w) ++os;
      f(r1, r2, os);
    }
  }
}

inline uint64_t rank_perm(const int* x, int N, const std::vector<uint64_t>& fact) {
  uint32_t unused = (N >= 32) ? ~0u : ((1u << N) - 1);
  uint64_t idx = 0;
  for (int i = 0; i < N; ++i) {
    uint32_t below = unused & ((1u << x[i]) - 1);
    idx += uint64_t(std::popcount(below)) * fact[N - 1 - i];
    unused &= ~(1u << x[i]);
  }
  return idx;
}

std::vector<uint64_t> factorials(int N);

}  // namespace lf::grid::detail
