#pragma once

#include <cstddef>
#include <span>

#include "detail/word_kernels.hpp"
#include "sigkit/path.hpp"

namespace sigkit::detail {

template <typename Real, std::uint32_t N>
inline void run_prefixes_fixed(const double* data, std::size_t channels, std::size_t first,
                               std::size_t last, const PackedWord& w, Real* prefix) {
  Letter letters[N];
  for (std::uint32_t k = 0; k < N; ++k) letters[k] = w.letter(k);
  Real delta[N];
  for (std::size_t j = first + 1; j <= last; ++j) {
    const double* prev = data + (j - 1) * channels;
    const double* cur = data + j * channels;
    for (std::uint32_t k = 0; k < N; ++k) delta[k] = static_cast<Real>(cur[letters[k]] - prev[letters[k]]);
    advance_prefixes(prefix, N, delta);
  }
}

/// Runs the prefix recursion for one word over samples first..last of one
/// path. On return prefix[k] holds S_{first,last}(w_[k]) for k = 0..|w|.
template <typename Real>
inline void run_prefixes(std::span<const double> path, std::size_t channels, std::size_t first,
                         std::size_t last, const PackedWord& w, Real* prefix) {
  const std::uint32_t n = w.length;
  prefix[0] = Real(1);
  for (std::uint32_t k = 1; k <= n; ++k) prefix[k] = Real(0);
  const double* data = path.data();
  // fixed lengths let the compiler unroll the recursion
  switch (n) {
    case 2: return run_prefixes_fixed<Real, 2>(data, channels, first, last, w, prefix);
    case 3: return run_prefixes_fixed<Real, 3>(data, channels, first, last, w, prefix);
    case 4: return run_prefixes_fixed<Real, 4>(data, channels, first, last, w, prefix);
    case 5: return run_prefixes_fixed<Real, 5>(data, channels, first, last, w, prefix);
    case 6: return run_prefixes_fixed<Real, 6>(data, channels, first, last, w, prefix);
    case 7: return run_prefixes_fixed<Real, 7>(data, channels, first, last, w, prefix);
    case 8: return run_prefixes_fixed<Real, 8>(data, channels, first, last, w, prefix);
    default: break;
  }
  Real delta[kMaxKernelLength];
  for (std::size_t j = first + 1; j <= last; ++j) {
    gather_increment(data + (j - 1) * channels, data + j * channels, w, Real(1), delta);
    advance_prefixes(prefix, n, delta);
  }
}

/// S_{first,last}(X, w) for one path. Single letters are the displacement,
/// taken directly from the endpoint samples.
inline double word_coefficient(std::span<const double> path, std::size_t channels,
                               std::size_t first, std::size_t last, const PackedWord& w,
                               Precision precision) {
  if (w.length == 1) {
    const Letter c = w.letter(0);
    const double value = path[last * channels + c] - path[first * channels + c];
    return precision == Precision::Float32 ? static_cast<double>(static_cast<float>(value))
                                           : value;
  }
  if (precision == Precision::Float32) {
    float prefix[kMaxKernelLength + 1];
    run_prefixes<float>(path, channels, first, last, w, prefix);
    return prefix[w.length];
  }
  double prefix[kMaxKernelLength + 1];
  run_prefixes<double>(path, channels, first, last, w, prefix);
  return prefix[w.length];
}

}  // namespace sigkit::detail
