#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sigkit/wordsets.hpp"

namespace sigkit {

/// B paths of M+1 samples in R^d, stored row-major as [path][sample][channel].
/// Increments are never materialized; kernels difference adjacent samples.
class PathBatch {
 public:
  PathBatch() = default;
  /// Throws a shape error if samples.size() != batch * points * channels, and a
  /// domain error on non-finite values unless allow_nonfinite is set.
  PathBatch(std::size_t batch, std::size_t points, std::size_t channels,
            std::vector<double> samples, bool allow_nonfinite = false);

  std::size_t batch() const noexcept { return batch_; }
  /// Number of samples per path (M + 1).
  std::size_t points() const noexcept { return points_; }
  /// Number of linear segments per path (M).
  std::size_t segments() const noexcept { return points_ == 0 ? 0 : points_ - 1; }
  std::size_t channels() const noexcept { return channels_; }

  std::span<const double> values() const noexcept { return samples_; }
  std::span<const double> path(std::size_t b) const {
    return std::span<const double>(samples_).subspan(b * points_ * channels_, points_ * channels_);
  }
  std::span<const double> sample(std::size_t b, std::size_t j) const {
    return std::span<const double>(samples_).subspan((b * points_ + j) * channels_, channels_);
  }
  double at(std::size_t b, std::size_t j, std::size_t c) const {
    return samples_[(b * points_ + j) * channels_ + c];
  }
  /// X_j - X_{j-1} for channel c, j = 1..M.
  double increment(std::size_t b, std::size_t j, std::size_t c) const {
    return at(b, j, c) - at(b, j - 1, c);
  }

 private:
  std::size_t batch_ = 0;
  std::size_t points_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> samples_;
};

/// B rows of coefficients, one column per word-set column (ε first when the
/// word set includes it).
class CoefficientBatch {
 public:
  CoefficientBatch(WordSet words, std::size_t batch);
  CoefficientBatch(WordSet words, std::size_t batch, std::vector<double> values);

  const WordSet& wordset() const noexcept { return words_; }
  std::size_t batch() const noexcept { return batch_; }
  std::size_t width() const noexcept { return words_.width(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> row(std::size_t b) const {
    return std::span<const double>(values_).subspan(b * width(), width());
  }
  std::span<double> row(std::size_t b) {
    return std::span<double>(values_).subspan(b * width(), width());
  }
  /// Coefficient of the word at position i of the word set (ε column skipped).
  double coefficient(std::size_t b, std::size_t i) const {
    return values_[b * width() + column_offset() + i];
  }
  double& coefficient(std::size_t b, std::size_t i) {
    return values_[b * width() + column_offset() + i];
  }
  std::size_t column_offset() const noexcept { return words_.include_empty() ? 1 : 0; }

 private:
  WordSet words_;
  std::size_t batch_ = 0;
  std::vector<double> values_;
};

/// Index pairs (l, r) into the sample axis selecting windows [t_l, t_r].
struct WindowSpec {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  std::size_t size() const noexcept { return pairs.size(); }
  /// Throws a window error unless 0 <= l < r <= segments for every pair.
  void validate(std::size_t segments) const;
};

enum class Precision { Float64, Float32 };

struct ComputeOptions {
  /// Worker cap; 0 means the process default (see set_default_threads).
  int threads = 0;
  /// Accumulation precision of the forward kernels.
  Precision precision = Precision::Float64;
};

}  // namespace sigkit
