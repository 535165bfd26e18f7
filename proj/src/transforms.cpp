#include "sigkit/transforms.hpp"

#include <algorithm>

namespace sigkit {

PathBatch lead_lag(const PathBatch& paths) {
  if (paths.segments() == 0) {
    throw Error(ErrorKind::Domain, "lead-lag needs at least two samples per path");
  }
  const std::size_t d = paths.channels();
  const std::size_t m = paths.segments();
  const std::size_t points = 2 * m + 1;
  std::vector<double> out(paths.batch() * points * 2 * d);
  for (std::size_t b = 0; b < paths.batch(); ++b) {
    double* dst = out.data() + b * points * 2 * d;
    for (std::size_t p = 0; p < points; ++p) {
      const std::size_t lag = p / 2;
      const std::size_t lead = (p + 1) / 2;
      const auto lag_sample = paths.sample(b, lag);
      const auto lead_sample = paths.sample(b, lead);
      std::copy(lag_sample.begin(), lag_sample.end(), dst + p * 2 * d);
      std::copy(lead_sample.begin(), lead_sample.end(), dst + p * 2 * d + d);
    }
  }
  return PathBatch(paths.batch(), points, 2 * d, std::move(out), true);
}

PathBatch time_reverse(const PathBatch& paths) {
  const std::size_t points = paths.points();
  const std::size_t d = paths.channels();
  std::vector<double> out(paths.values().begin(), paths.values().end());
  for (std::size_t b = 0; b < paths.batch(); ++b) {
    for (std::size_t j = 0; j < points; ++j) {
      const auto src = paths.sample(b, points - 1 - j);
      std::copy(src.begin(), src.end(), out.begin() + static_cast<std::ptrdiff_t>((b * points + j) * d));
    }
  }
  return PathBatch(paths.batch(), points, d, std::move(out), true);
}

}  // namespace sigkit
