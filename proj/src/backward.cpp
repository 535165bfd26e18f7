#include "sigkit/backward.hpp"

#include <algorithm>
#include <string>

#include "detail/forward_kernel.hpp"
#include "detail/parallel_for.hpp"
#include "detail/word_kernels.hpp"

namespace sigkit {

namespace {

struct InverseFactorials {
  std::array<double, detail::kMaxKernelLength + 1> value{};
  constexpr InverseFactorials() {
    value[0] = 1.0;
    for (std::uint32_t k = 1; k <= detail::kMaxKernelLength; ++k) value[k] = value[k - 1] / k;
  }
};
constexpr InverseFactorials kInverseFactorial{};

void gather(std::span<const Letter> word, std::span<const double> increment, double sign,
            double* delta) {
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (word[k] >= increment.size()) {
      throw Error(ErrorKind::InvalidLetter, "letter " + std::to_string(word[k] + 1) +
                                                " exceeds increment dimension " +
                                                std::to_string(increment.size()));
    }
    delta[k] = sign * increment[word[k]];
  }
}

void require_short(std::span<const Letter> word) {
  if (word.size() > detail::kMaxKernelLength) {
    throw Error(ErrorKind::Capacity, "word longer than " +
                                         std::to_string(detail::kMaxKernelLength) + " letters");
  }
}

// Adds the gradient contributions of every word of `ws` over samples
// first..last of one path. inc_rows[j * channels + c] accumulates dL/dΔ_j.
void accumulate_path(std::span<const double> path, std::size_t channels, std::size_t first,
                     std::size_t last, const WordSet& ws, std::span<const double> upstream_row,
                     double* inc_rows, std::size_t stride, std::vector<double>& checkpoints) {
  const std::size_t column = ws.include_empty() ? 1 : 0;
  const double* data = path.data();
  double delta[detail::kMaxKernelLength];
  double prefix[detail::kMaxKernelLength + 1];

  for (std::size_t i = 0; i < ws.size(); ++i) {
    const double weight = upstream_row[column + i];
    if (weight == 0.0) continue;
    const PackedWord& w = ws.packed(i);
    const std::uint32_t n = w.length;

    if (stride == 0) {
      detail::run_prefixes<double>(path, channels, first, last, w, prefix);
    } else {
      const std::size_t slots = (last - first) / stride + 1;
      checkpoints.resize(slots * (n + 1));
      prefix[0] = 1.0;
      std::fill(prefix + 1, prefix + n + 1, 0.0);
      std::copy(prefix, prefix + n + 1, checkpoints.begin());
      for (std::size_t j = first + 1; j <= last; ++j) {
        detail::gather_increment(data + (j - 1) * channels, data + j * channels, w, 1.0, delta);
        detail::advance_prefixes(prefix, n, delta);
        if ((j - first) % stride == 0) {
          std::copy(prefix, prefix + n + 1,
                    checkpoints.begin() + static_cast<std::ptrdiff_t>(((j - first) / stride) * (n + 1)));
        }
      }
    }

    ReconstructionState state(w, std::span<const double>(prefix, n + 1));
    for (std::size_t j = last; j > first; --j) {
      detail::gather_increment(data + (j - 1) * channels, data + j * channels, w, 1.0, delta);
      const std::span<const double> d(delta, n);
      if (stride != 0 && (j - 1 - first) % stride == 0) {
        state.set_left(std::span<const double>(
            checkpoints.data() + ((j - 1 - first) / stride) * (n + 1), n + 1));
      } else {
        state.rewind_left(d);
      }
      state.accumulate_grad(weight, d, std::span<double>(inc_rows + j * channels, channels));
      state.extend_right(d);
    }
  }
}

// Turns increment gradients stored in rows 1..M into sample gradients in place.
void telescope(double* rows, std::size_t segments, std::size_t channels) {
  for (std::size_t j = 0; j <= segments; ++j) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double next = j < segments ? rows[(j + 1) * channels + c] : 0.0;
      rows[j * channels + c] -= next;
    }
  }
}

void require_shapes(const PathBatch& paths, const WordSet& ws, std::size_t upstream_size,
                    std::size_t expected_upstream) {
  if (ws.alphabet().size != paths.channels()) {
    throw Error(ErrorKind::Shape, "word set alphabet has " + std::to_string(ws.alphabet().size) +
                                      " letters but paths have " +
                                      std::to_string(paths.channels()) + " channels");
  }
  if (upstream_size != expected_upstream) {
    throw Error(ErrorKind::Shape, "upstream gradient has " + std::to_string(upstream_size) +
                                      " values, expected " + std::to_string(expected_upstream));
  }
}

}  // namespace

double exp_coeff_grad(std::span<const double> increment, std::span<const Letter> word,
                      Letter channel) {
  if (channel >= increment.size()) {
    throw Error(ErrorKind::InvalidLetter, "channel " + std::to_string(channel + 1) +
                                              " exceeds increment dimension");
  }
  require_short(word);
  double delta[detail::kMaxKernelLength];
  gather(word, increment, 1.0, delta);
  double total = 0.0;
  for (std::size_t r = 0; r < word.size(); ++r) {
    if (word[r] != channel) continue;
    double product = 1.0;
    for (std::size_t s = 0; s < word.size(); ++s) {
      if (s != r) product *= delta[s];
    }
    total += product;
  }
  return total * kInverseFactorial.value[word.size()];
}

void right_step(std::span<double> suffix_values, std::span<const Letter> word,
                std::span<const double> increment) {
  require_short(word);
  if (suffix_values.size() != word.size() + 1) {
    throw Error(ErrorKind::Shape, "right_step needs |w|+1 suffix values");
  }
  double delta[detail::kMaxKernelLength];
  gather(word, increment, 1.0, delta);
  detail::prepend_segment(suffix_values.data(), static_cast<std::uint32_t>(word.size()), delta);
}

void left_step(std::span<double> prefix_values, std::span<const Letter> word,
               std::span<const double> increment) {
  require_short(word);
  if (prefix_values.size() != word.size() + 1) {
    throw Error(ErrorKind::Shape, "left_step needs |w|+1 prefix values");
  }
  double delta[detail::kMaxKernelLength];
  gather(word, increment, -1.0, delta);
  detail::advance_prefixes(prefix_values.data(), static_cast<std::uint32_t>(word.size()), delta);
}

ReconstructionState::ReconstructionState(const PackedWord& word,
                                         std::span<const double> terminal_prefixes)
    : word_(word) {
  if (terminal_prefixes.size() != word.length + 1) {
    throw Error(ErrorKind::Shape, "terminal prefix values must have |w|+1 entries");
  }
  std::copy(terminal_prefixes.begin(), terminal_prefixes.end(), left_.begin());
  right_[0] = 1.0;
}

void ReconstructionState::rewind_left(std::span<const double> delta) {
  double negated[detail::kMaxKernelLength];
  for (std::uint32_t k = 0; k < word_.length; ++k) negated[k] = -delta[k];
  detail::advance_prefixes(left_.data(), word_.length, negated);
}

void ReconstructionState::extend_right(std::span<const double> delta) {
  detail::prepend_segment(right_.data(), word_.length, delta.data());
}

void ReconstructionState::set_left(std::span<const double> prefixes) {
  std::copy(prefixes.begin(), prefixes.end(), left_.begin());
}

void ReconstructionState::accumulate_grad(double weight, std::span<const double> delta,
                                          std::span<double> grad) const {
  // d/dΔ of sum over w = a∘b∘v of left(a) exp(Δ, b) right(v); b spans letters p..q-1.
  const std::uint32_t n = word_.length;
  double after[detail::kMaxKernelLength + 1];
  for (std::uint32_t p = 0; p < n; ++p) {
    if (left_[p] == 0.0) continue;
    for (std::uint32_t q = p + 1; q <= n; ++q) {
      const double coef = weight * left_[p] * right_[n - q] * kInverseFactorial.value[q - p];
      if (coef == 0.0) continue;
      after[q - 1] = 1.0;
      for (std::uint32_t r = q - 1; r > p; --r) after[r - 1] = after[r] * delta[r];
      double before = 1.0;
      for (std::uint32_t r = p; r < q; ++r) {
        grad[word_.letter(r)] += coef * before * after[r];
        before *= delta[r];
      }
    }
  }
}

void signature_backward_into(const PathBatch& paths, const WordSet& ws,
                             std::span<const double> upstream, std::span<double> out,
                             const BackwardOptions& options) {
  require_shapes(paths, ws, upstream.size(), paths.batch() * ws.width());
  const std::size_t points = paths.points();
  const std::size_t channels = paths.channels();
  const std::size_t per_path = points * channels;
  if (out.size() != paths.batch() * per_path) {
    throw Error(ErrorKind::Shape, "gradient output has " + std::to_string(out.size()) +
                                      " values, expected " +
                                      std::to_string(paths.batch() * per_path));
  }
  std::fill(out.begin(), out.end(), 0.0);
  detail::parallel_for(paths.batch(), options.threads, [&](std::size_t b) {
    std::vector<double> checkpoints;
    double* rows = out.data() + b * per_path;
    accumulate_path(paths.path(b), channels, 0, paths.segments(), ws,
                    upstream.subspan(b * ws.width(), ws.width()), rows,
                    options.checkpoint_stride, checkpoints);
    telescope(rows, paths.segments(), channels);
  });
}

std::vector<double> signature_backward(const PathBatch& paths, const WordSet& ws,
                                       std::span<const double> upstream,
                                       const BackwardOptions& options) {
  std::vector<double> out(paths.batch() * paths.points() * paths.channels(), 0.0);
  signature_backward_into(paths, ws, upstream, out, options);
  return out;
}

std::vector<double> signature_windows_backward(const PathBatch& paths, const WordSet& ws,
                                               const WindowSpec& windows,
                                               std::span<const double> upstream,
                                               const BackwardOptions& options) {
  windows.validate(paths.segments());
  const std::size_t per_window = paths.batch() * ws.width();
  require_shapes(paths, ws, upstream.size(), windows.size() * per_window);
  const std::size_t channels = paths.channels();
  const std::size_t per_path = paths.points() * channels;
  std::vector<double> out(paths.batch() * per_path, 0.0);
  detail::parallel_for(paths.batch(), options.threads, [&](std::size_t b) {
    std::vector<double> checkpoints;
    double* rows = out.data() + b * per_path;
    for (std::size_t k = 0; k < windows.size(); ++k) {
      const auto [l, r] = windows.pairs[k];
      accumulate_path(paths.path(b), channels, l, r, ws,
                      upstream.subspan(k * per_window + b * ws.width(), ws.width()), rows,
                      options.checkpoint_stride, checkpoints);
    }
    telescope(rows, paths.segments(), channels);
  });
  return out;
}

std::vector<double> increment_to_sample_grads(std::span<const double> increment_grads,
                                              std::size_t segments, std::size_t channels) {
  if (increment_grads.size() != segments * channels) {
    throw Error(ErrorKind::Shape, "increment gradients must have M x d entries");
  }
  std::vector<double> out((segments + 1) * channels, 0.0);
  std::copy(increment_grads.begin(), increment_grads.end(),
            out.begin() + static_cast<std::ptrdiff_t>(channels));
  telescope(out.data(), segments, channels);
  return out;
}

}  // namespace sigkit
