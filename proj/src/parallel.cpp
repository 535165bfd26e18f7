#include "sigkit/parallel.hpp"

#include <atomic>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace sigkit {

namespace {
std::atomic<int> g_default_threads{0};
}

void set_default_threads(int threads) { g_default_threads.store(threads > 0 ? threads : 0); }

int default_threads() {
  const int configured = g_default_threads.load();
  if (configured > 0) return configured;
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int resolve_threads(int requested) {
  const int n = requested > 0 ? requested : default_threads();
  return n > 0 ? n : 1;
}

}  // namespace sigkit
