#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fastice {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Deterministic parallel sum: per-block partial sums are computed in
// parallel over fixed-size blocks, then combined serially in block order.
// The result is bitwise identical for any thread count.
inline constexpr std::size_t kReductionBlock = 1024;

template <class F>
double deterministic_sum(std::size_t n, F&& value_at) {
  const std::size_t n_blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(n_blocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(n_blocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t end = begin + kReductionBlock < n ? begin + kReductionBlock : n;
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += value_at(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

inline double deterministic_sum(const std::vector<double>& x) {
  return deterministic_sum(x.size(), [&](std::size_t i) { return x[i]; });
}

}  // namespace fastice
