#include "sigkit/path.hpp"

#include <cmath>
#include <string>

namespace sigkit {

PathBatch::PathBatch(std::size_t batch, std::size_t points, std::size_t channels,
                     std::vector<double> samples, bool allow_nonfinite)
    : batch_(batch), points_(points), channels_(channels), samples_(std::move(samples)) {
  if (channels == 0) throw Error(ErrorKind::Shape, "paths need at least one channel");
  if (points == 0) throw Error(ErrorKind::Shape, "paths need at least one sample");
  if (samples_.size() != batch * points * channels) {
    throw Error(ErrorKind::Shape, "expected " + std::to_string(batch * points * channels) +
                                      " sample values for shape (" + std::to_string(batch) + ", " +
                                      std::to_string(points) + ", " + std::to_string(channels) +
                                      "), got " + std::to_string(samples_.size()));
  }
  if (!allow_nonfinite) {
    for (std::size_t k = 0; k < samples_.size(); ++k) {
      if (!std::isfinite(samples_[k])) {
        const std::size_t row = k / channels;
        throw Error(ErrorKind::Domain, "non-finite value in path " +
                                           std::to_string(row / points + 1) + ", sample " +
                                           std::to_string(row % points + 1) + ", channel " +
                                           std::to_string(k % channels + 1));
      }
    }
  }
}

CoefficientBatch::CoefficientBatch(WordSet words, std::size_t batch)
    : words_(std::move(words)), batch_(batch), values_(batch * words_.width(), 0.0) {
  if (words_.include_empty()) {
    for (std::size_t b = 0; b < batch_; ++b) values_[b * width()] = 1.0;
  }
}

CoefficientBatch::CoefficientBatch(WordSet words, std::size_t batch, std::vector<double> values)
    : words_(std::move(words)), batch_(batch), values_(std::move(values)) {
  if (values_.size() != batch_ * words_.width()) {
    throw Error(ErrorKind::Shape, "coefficient array has " + std::to_string(values_.size()) +
                                      " values, expected " +
                                      std::to_string(batch_ * words_.width()));
  }
}

void WindowSpec::validate(std::size_t segments) const {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [l, r] = pairs[i];
    if (l >= r || r > segments) {
      throw Error(ErrorKind::Window, "window " + std::to_string(i + 1) + " = (" +
                                         std::to_string(l) + ", " + std::to_string(r) +
                                         ") must satisfy 0 <= l < r <= " +
                                         std::to_string(segments));
    }
  }
}

}  // namespace sigkit
