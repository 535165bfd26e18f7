#pragma once

#include <cstddef>
#include <cstdint>

#include "sigkit/parallel.hpp"

namespace sigkit::detail {

/// Runs fn(i) for i in [0, count). Each index is handled by exactly one
/// worker, so writes to per-index outputs need no synchronization.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const int workers = resolve_threads(threads);
  const auto n = static_cast<std::int64_t>(count);
  if (workers <= 1 || count <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for num_threads(workers) schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
}

}  // namespace sigkit::detail
