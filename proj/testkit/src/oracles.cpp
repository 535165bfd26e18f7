#include "sigkit/testkit/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sigkit::testkit {

namespace {

std::size_t level_size(std::uint32_t d, std::uint32_t n) {
  std::size_t s = 1;
  for (std::uint32_t k = 0; k < n; ++k) s *= d;
  return s;
}

void guard(std::uint32_t d, std::uint32_t depth, std::size_t points) {
  std::size_t total = 0;
  for (std::uint32_t n = 0; n <= depth; ++n) {
    total += level_size(d, n);
    if (total > kOracleMaxCoefficients) {
      throw Error(ErrorKind::Capacity, "oracle refuses d=" + std::to_string(d) +
                                           ", depth=" + std::to_string(depth) +
                                           ": too many coefficients");
    }
  }
  if (points > kOracleMaxPoints) {
    throw Error(ErrorKind::Capacity, "oracle refuses paths with " + std::to_string(points) +
                                         " samples");
  }
}

std::size_t flat_index(std::uint32_t d, std::span<const Letter> word) {
  std::size_t idx = 0;
  for (Letter a : word) idx = idx * d + a;
  return idx;
}

void add_scaled(DenseTensor& dst, const DenseTensor& src, double scale) {
  for (std::uint32_t n = 0; n <= dst.depth; ++n) {
    for (std::size_t i = 0; i < dst.levels[n].size(); ++i) dst.levels[n][i] += scale * src.levels[n][i];
  }
}

}  // namespace

DenseTensor DenseTensor::zero(std::uint32_t d, std::uint32_t depth) {
  DenseTensor t;
  t.d = d;
  t.depth = depth;
  for (std::uint32_t n = 0; n <= depth; ++n) t.levels.emplace_back(level_size(d, n), 0.0);
  return t;
}

DenseTensor DenseTensor::identity(std::uint32_t d, std::uint32_t depth) {
  DenseTensor t = zero(d, depth);
  t.levels[0][0] = 1.0;
  return t;
}

double DenseTensor::at(std::span<const Letter> word) const {
  return levels.at(word.size()).at(flat_index(d, word));
}

double& DenseTensor::at(std::span<const Letter> word) {
  return levels.at(word.size()).at(flat_index(d, word));
}

DenseTensor dense_product(const DenseTensor& a, const DenseTensor& b) {
  DenseTensor c = DenseTensor::zero(a.d, a.depth);
  for (std::uint32_t n = 0; n <= a.depth; ++n) {
    for (std::uint32_t k = 0; k <= n; ++k) {
      const auto& left = a.levels[k];
      const auto& right = b.levels[n - k];
      for (std::size_t i = 0; i < left.size(); ++i) {
        for (std::size_t j = 0; j < right.size(); ++j) {
          c.levels[n][i * right.size() + j] += left[i] * right[j];
        }
      }
    }
  }
  return c;
}

DenseTensor dense_exp(std::span<const double> increment, std::uint32_t depth) {
  const auto d = static_cast<std::uint32_t>(increment.size());
  DenseTensor e = DenseTensor::identity(d, depth);
  for (std::uint32_t n = 1; n <= depth; ++n) {
    const auto& prev = e.levels[n - 1];
    auto& cur = e.levels[n];
    for (std::size_t i = 0; i < prev.size(); ++i) {
      for (std::uint32_t a = 0; a < d; ++a) cur[i * d + a] = prev[i] * increment[a] / n;
    }
  }
  return e;
}

DenseTensor dense_exp_tensor(const DenseTensor& x) {
  DenseTensor result = DenseTensor::identity(x.d, x.depth);
  DenseTensor power = DenseTensor::identity(x.d, x.depth);
  double factorial = 1.0;
  for (std::uint32_t k = 1; k <= x.depth; ++k) {
    power = dense_product(power, x);
    factorial *= k;
    add_scaled(result, power, 1.0 / factorial);
  }
  return result;
}

DenseTensor dense_log(const DenseTensor& a) {
  DenseTensor x = a;
  x.levels[0][0] = 0.0;
  DenseTensor result = DenseTensor::zero(a.d, a.depth);
  DenseTensor power = DenseTensor::identity(a.d, a.depth);
  for (std::uint32_t k = 1; k <= a.depth; ++k) {
    power = dense_product(power, x);
    add_scaled(result, power, ((k % 2) ? 1.0 : -1.0) / k);
  }
  return result;
}

DenseTensor dense_signature_oracle(std::span<const double> samples, std::size_t points,
                                   std::uint32_t d, std::uint32_t depth) {
  guard(d, depth, points);
  if (samples.size() != points * d) throw Error(ErrorKind::Shape, "oracle sample shape mismatch");
  DenseTensor s = DenseTensor::identity(d, depth);
  std::vector<double> delta(d);
  for (std::size_t j = 1; j < points; ++j) {
    for (std::uint32_t c = 0; c < d; ++c) delta[c] = samples[j * d + c] - samples[(j - 1) * d + c];
    s = dense_product(s, dense_exp(delta, depth));
  }
  return s;
}

std::vector<DenseTensor> dense_signature_oracle(const PathBatch& paths, std::uint32_t depth) {
  std::vector<DenseTensor> out;
  out.reserve(paths.batch());
  for (std::size_t b = 0; b < paths.batch(); ++b) {
    out.push_back(dense_signature_oracle(paths.path(b), paths.points(),
                                         static_cast<std::uint32_t>(paths.channels()), depth));
  }
  return out;
}

std::vector<std::vector<Letter>> shuffle_enumerate(std::span<const Letter> u,
                                                   std::span<const Letter> v) {
  if (u.size() + v.size() > 8) throw Error(ErrorKind::Capacity, "shuffle oracle limited to 8 letters");
  std::vector<std::vector<Letter>> out;
  std::vector<Letter> current;
  auto rec = [&](auto&& self, std::size_t i, std::size_t j) -> void {
    if (i == u.size() && j == v.size()) {
      out.push_back(current);
      return;
    }
    if (i < u.size()) {
      current.push_back(u[i]);
      self(self, i + 1, j);
      current.pop_back();
    }
    if (j < v.size()) {
      current.push_back(v[j]);
      self(self, i, j + 1);
      current.pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

std::vector<double> finite_difference(
    const PathBatch& paths, const std::function<std::vector<double>(const PathBatch&)>& objective,
    double h) {
  const std::size_t per_path = paths.points() * paths.channels();
  std::vector<double> grad(paths.values().size(), 0.0);
  std::vector<double> perturbed(paths.values().begin(), paths.values().end());
  // Perturbing coordinate k of every path at once is safe: objectives are per path.
  for (std::size_t k = 0; k < per_path; ++k) {
    std::vector<double> steps(paths.batch());
    for (std::size_t b = 0; b < paths.batch(); ++b) {
      const double x = paths.values()[b * per_path + k];
      steps[b] = h * std::max(1.0, std::abs(x));
      perturbed[b * per_path + k] = x + steps[b];
    }
    const auto plus = objective(PathBatch(paths.batch(), paths.points(), paths.channels(), perturbed, true));
    for (std::size_t b = 0; b < paths.batch(); ++b) {
      perturbed[b * per_path + k] = paths.values()[b * per_path + k] - steps[b];
    }
    const auto minus = objective(PathBatch(paths.batch(), paths.points(), paths.channels(), perturbed, true));
    for (std::size_t b = 0; b < paths.batch(); ++b) {
      grad[b * per_path + k] = (plus[b] - minus[b]) / (2.0 * steps[b]);
      perturbed[b * per_path + k] = paths.values()[b * per_path + k];
    }
  }
  return grad;
}

std::vector<double> oracle_coefficients(const PathBatch& paths, const WordSet& ws) {
  const auto sigs = dense_signature_oracle(paths, ws.max_length());
  std::vector<double> out;
  out.reserve(paths.batch() * ws.width());
  for (std::size_t b = 0; b < paths.batch(); ++b) {
    if (ws.include_empty()) out.push_back(1.0);
    for (std::size_t i = 0; i < ws.size(); ++i) out.push_back(sigs[b].at(ws.letters(i)));
  }
  return out;
}

std::vector<double> finite_difference_grad(const PathBatch& paths, const WordSet& ws,
                                           std::span<const double> upstream, double h) {
  if (upstream.size() != paths.batch() * ws.width()) {
    throw Error(ErrorKind::Shape, "upstream shape mismatch in finite_difference_grad");
  }
  std::vector<std::vector<Letter>> letters;
  for (std::size_t i = 0; i < ws.size(); ++i) letters.push_back(ws.letters(i));
  const std::size_t column = ws.include_empty() ? 1 : 0;
  const std::uint32_t depth = ws.max_length();
  auto objective = [&](const PathBatch& p) {
    std::vector<double> loss(p.batch(), 0.0);
    for (std::size_t b = 0; b < p.batch(); ++b) {
      const DenseTensor s = dense_signature_oracle(p.path(b), p.points(),
                                                   static_cast<std::uint32_t>(p.channels()), depth);
      for (std::size_t i = 0; i < letters.size(); ++i) {
        loss[b] += upstream[b * ws.width() + column + i] * s.at(letters[i]);
      }
    }
    return loss;
  };
  return finite_difference(paths, objective, h);
}

}  // namespace sigkit::testkit
