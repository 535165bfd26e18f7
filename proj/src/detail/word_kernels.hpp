#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "sigkit/words.hpp"

namespace sigkit::detail {

inline constexpr std::uint32_t kMaxKernelLength = 64;

template <typename Real>
struct Reciprocals {
  std::array<Real, kMaxKernelLength + 1> value{};
  constexpr Reciprocals() {
    value[0] = Real(0);
    for (std::uint32_t m = 1; m <= kMaxKernelLength; ++m) value[m] = Real(1) / Real(m);
  }
};

template <typename Real>
inline constexpr Reciprocals<Real> kReciprocal{};

/// delta[k] = sign * (X_j - X_{j-1}) on the channel of letter k of the word.
template <typename Real>
inline void gather_increment(const double* prev_sample, const double* sample, const PackedWord& w,
                             Real sign, Real* delta) {
  for (std::uint32_t k = 0; k < w.length; ++k) {
    const Letter c = w.letter(k);
    delta[k] = sign * static_cast<Real>(sample[c] - prev_sample[c]);
  }
}

/// Advances the values on the prefixes of a word across one linear segment.
/// prefix[k] holds the coefficient of the length-k prefix (prefix[0] = 1);
/// delta[k] is the segment increment on the channel of letter k. Longer
/// prefixes are updated first so each update reads the previous-time values
/// of the shorter ones.
template <typename Real>
inline void advance_prefixes(Real* prefix, std::uint32_t n, const Real* delta) {
  const auto& inv = kReciprocal<Real>.value;
  for (std::uint32_t m = n; m >= 1; --m) {
    Real h = 0;
    for (std::uint32_t k = 0; k < m; ++k) h = delta[k] * inv[m - k] * (prefix[k] + h);
    prefix[m] += h;
  }
}

/// One step of the suffix recursion over the suffixes of an n-letter word.
/// suffix[m] holds the coefficient of the length-m suffix (suffix[0] = 1);
/// delta[k] is the increment on the channel of letter k. Each suffix v of
/// length m gains sum_{p>=1} exp(delta, v[..p]) * suffix[m - p].
template <typename Real>
inline void prepend_segment(Real* suffix, std::uint32_t n, const Real* delta) {
  const auto& inv = kReciprocal<Real>.value;
  for (std::uint32_t m = n; m >= 1; --m) {
    const std::uint32_t start = n - m;  // first letter of the length-m suffix
    Real h = 0;
    for (std::uint32_t p = m; p >= 1; --p) h = delta[start + p - 1] * inv[p] * (suffix[m - p] + h);
    suffix[m] += h;
  }
}

}  // namespace sigkit::detail
