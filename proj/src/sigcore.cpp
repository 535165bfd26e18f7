#include "sigkit/sigcore.hpp"

#include <algorithm>
#include <string>

#include "detail/parallel_for.hpp"
#include "detail/truncated_tensor.hpp"
#include "detail/word_kernels.hpp"
#include "detail/forward_kernel.hpp"

namespace sigkit {

namespace {

void require_matching_channels(const PathBatch& paths, const WordSet& ws) {
  if (ws.alphabet().size != paths.channels()) {
    throw Error(ErrorKind::Shape, "word set alphabet has " + std::to_string(ws.alphabet().size) +
                                      " letters but paths have " +
                                      std::to_string(paths.channels()) + " channels");
  }
}

void require_same_words(const CoefficientBatch& a, const CoefficientBatch& b) {
  const auto wa = a.wordset().words();
  const auto wb = b.wordset().words();
  if (!(a.wordset().alphabet() == b.wordset().alphabet()) ||
      !std::equal(wa.begin(), wa.end(), wb.begin(), wb.end())) {
    throw Error(ErrorKind::Shape, "coefficient batches are over different word sets");
  }
  if (a.batch() != b.batch()) {
    throw Error(ErrorKind::Shape, "batch sizes differ: " + std::to_string(a.batch()) + " vs " +
                                      std::to_string(b.batch()));
  }
}

}  // namespace

double segment_exp_coeff(std::span<const double> increment, std::span<const Letter> word) {
  double value = 1.0;
  for (std::size_t r = 0; r < word.size(); ++r) {
    if (word[r] >= increment.size()) {
      throw Error(ErrorKind::InvalidLetter, "letter " + std::to_string(word[r] + 1) +
                                                " exceeds increment dimension " +
                                                std::to_string(increment.size()));
    }
    value *= increment[word[r]] / static_cast<double>(r + 1);
  }
  return value;
}

double horner_update(std::span<const double> prev, std::span<const double> increment,
                     std::span<const Letter> word) {
  const std::size_t n = word.size();
  if (prev.size() != n + 1) {
    throw Error(ErrorKind::Shape, "horner_update needs |w|+1 prefix values, got " +
                                      std::to_string(prev.size()));
  }
  double h = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (word[k] >= increment.size()) {
      throw Error(ErrorKind::InvalidLetter, "letter " + std::to_string(word[k] + 1) +
                                                " exceeds increment dimension " +
                                                std::to_string(increment.size()));
    }
    h = increment[word[k]] / static_cast<double>(n - k) * (prev[k] + h);
  }
  return prev[n] + h;
}

CoefficientBatch signature_forward(const PathBatch& paths, const WordSet& ws,
                                   const ComputeOptions& options) {
  require_matching_channels(paths, ws);
  const std::size_t batch = paths.batch();
  const std::size_t count = ws.size();
  const std::size_t last = paths.segments();
  CoefficientBatch out(ws, batch);
  detail::parallel_for(batch * count, options.threads, [&](std::size_t unit) {
    const std::size_t b = unit / count;
    const std::size_t i = unit % count;
    out.coefficient(b, i) =
        detail::word_coefficient(paths.path(b), paths.channels(), 0, last, ws.packed(i),
                                 options.precision);
  });
  return out;
}

std::vector<CoefficientBatch> signature_windows(const PathBatch& paths, const WordSet& ws,
                                                const WindowSpec& windows,
                                                const ComputeOptions& options) {
  require_matching_channels(paths, ws);
  windows.validate(paths.segments());
  const std::size_t batch = paths.batch();
  const std::size_t count = ws.size();
  std::vector<CoefficientBatch> out;
  out.reserve(windows.size());
  for (std::size_t k = 0; k < windows.size(); ++k) out.emplace_back(ws, batch);

  const std::size_t per_window = batch * count;
  detail::parallel_for(windows.size() * per_window, options.threads, [&](std::size_t unit) {
    const std::size_t k = unit / per_window;
    const std::size_t b = (unit % per_window) / count;
    const std::size_t i = unit % count;
    const auto [l, r] = windows.pairs[k];
    out[k].coefficient(b, i) =
        detail::word_coefficient(paths.path(b), paths.channels(), l, r, ws.packed(i),
                                 options.precision);
  });
  return out;
}

CoefficientBatch chen_concat(const CoefficientBatch& a, const CoefficientBatch& b) {
  require_same_words(a, b);
  const auto layout = detail::layout_for(a.wordset(), "chen_concat");
  CoefficientBatch out(a.wordset(), a.batch());
  std::vector<double> lhs(layout.size()), rhs(layout.size()), product(layout.size());
  for (std::size_t row = 0; row < a.batch(); ++row) {
    detail::load_row(a, row, lhs);
    detail::load_row(b, row, rhs);
    detail::tensor_multiply(layout, lhs, rhs, product);
    detail::store_row(product, out, row);
  }
  return out;
}

CoefficientBatch signature_inverse(const CoefficientBatch& a) {
  const auto layout = detail::layout_for(a.wordset(), "signature_inverse");
  CoefficientBatch out(a.wordset(), a.batch());
  std::vector<double> dense(layout.size()), inverse(layout.size());
  for (std::size_t row = 0; row < a.batch(); ++row) {
    detail::load_row(a, row, dense);
    detail::tensor_inverse(layout, dense, inverse);
    detail::store_row(inverse, out, row);
  }
  return out;
}

}  // namespace sigkit
