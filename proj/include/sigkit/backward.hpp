#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "sigkit/path.hpp"
#include "sigkit/wordsets.hpp"

namespace sigkit {

struct BackwardOptions {
  /// Worker cap; 0 means the process default.
  int threads = 0;
  /// When > 0, the per-word forward recomputation stores the prefix values
  /// every `checkpoint_stride` samples and the backward sweep restarts from
  /// them instead of relying on exp(-Δ) reconstruction alone. Memory then
  /// grows with M / stride.
  std::size_t checkpoint_stride = 0;
};

/// d/d increment[channel] of the coefficient of `word` in exp(increment).
double exp_coeff_grad(std::span<const double> increment, std::span<const Letter> word,
                      Letter channel);

/// Suffix values S_{t_{j+1},T}(v), v ranging over the suffixes of `word` by
/// length, become S_{t_j,T}(v) given increment Δ_{j+1}. In place.
void right_step(std::span<double> suffix_values, std::span<const Letter> word,
                std::span<const double> increment);

/// Prefix values S_{0,t_{j+1}}(u), u ranging over the prefixes of `word` by
/// length, become S_{0,t_j}(u) given increment Δ_{j+1}. In place.
void left_step(std::span<double> prefix_values, std::span<const Letter> word,
               std::span<const double> increment);

/// Reverse-sweep state of one word: its prefix values at the left end and
/// suffix values at the right end of the current segment.
///
/// Starts at j = M with left = terminal prefix values and right = identity;
/// each step() moves one segment towards the start.
class ReconstructionState {
 public:
  ReconstructionState(const PackedWord& word, std::span<const double> terminal_prefixes);

  std::size_t length() const noexcept { return word_.length; }
  std::span<const double> left() const noexcept { return {left_.data(), word_.length + 1}; }
  std::span<const double> right() const noexcept { return {right_.data(), word_.length + 1}; }

  /// Rewinds the prefix values across the segment with the given increment
  /// (word letters are already gathered: delta[k] is the increment on the
  /// channel of letter k).
  void rewind_left(std::span<const double> delta);
  void extend_right(std::span<const double> delta);
  void set_left(std::span<const double> prefixes);

  /// Adds weight * d S_{0,T}(w) / d Δ to grad (indexed by channel), for the
  /// segment whose increment (gathered per letter) is delta, given that
  /// left() holds values before that segment and right() values after it.
  void accumulate_grad(double weight, std::span<const double> delta, std::span<double> grad) const;

 private:
  PackedWord word_;
  std::array<double, 65> left_{};
  std::array<double, 65> right_{};
};

/// Gradients of sum_w upstream[b][w] * S_{0,T}(X_b, w) with respect to every
/// sample, shaped [path][sample][channel]. `upstream` is row-major B x width
/// (an ε column, when present, is ignored). Extra memory is O(sum |w|) per
/// worker and independent of the path length; only the terminal prefix
/// values of each word are kept while sweeping backwards.
std::vector<double> signature_backward(const PathBatch& paths, const WordSet& ws,
                                       std::span<const double> upstream,
                                       const BackwardOptions& options = {});

/// As signature_backward, writing into a caller-provided B x (M+1) x d array.
void signature_backward_into(const PathBatch& paths, const WordSet& ws,
                             std::span<const double> upstream, std::span<double> out,
                             const BackwardOptions& options = {});

/// Gradients for windowed signatures: upstream is K x B x width in window
/// order. Each window contributes independently; contributions are summed.
std::vector<double> signature_windows_backward(const PathBatch& paths, const WordSet& ws,
                                               const WindowSpec& windows,
                                               std::span<const double> upstream,
                                               const BackwardOptions& options = {});

/// Chain rule from increment gradients (M rows of d) to sample gradients
/// (M+1 rows of d): dL/dX_j = dL/dΔ_j - dL/dΔ_{j+1}.
std::vector<double> increment_to_sample_grads(std::span<const double> increment_grads,
                                              std::size_t segments, std::size_t channels);

}  // namespace sigkit
