#include "sigkit/logsig.hpp"

#include <string>

#include "detail/parallel_for.hpp"
#include "detail/truncated_tensor.hpp"
#include "sigkit/sigcore.hpp"

namespace sigkit {

namespace {

// Adjoint of out = x ⊗ t restricted to x(ε) = 0: accumulates into x_bar and t_bar.
void multiply_adjoint(const detail::TruncatedLayout& layout, std::span<const double> x,
                      std::span<const double> t, std::span<const double> out_bar,
                      std::span<double> x_bar, std::span<double> t_bar) {
  for (std::uint32_t n = 1; n <= layout.depth; ++n) {
    const double* zb = out_bar.data() + layout.offset[n];
    for (std::uint32_t k = 1; k <= n; ++k) {
      const std::size_t x_off = layout.offset[k];
      const std::size_t t_off = layout.offset[n - k];
      const std::uint64_t right_count = layout.power[n - k];
      for (std::uint64_t p = 0; p < layout.power[k]; ++p) {
        const double* row = zb + p * right_count;
        double acc = 0.0;
        const double xp = x[x_off + p];
        for (std::uint64_t s = 0; s < right_count; ++s) {
          acc += row[s] * t[t_off + s];
          t_bar[t_off + s] += row[s] * xp;
        }
        x_bar[x_off + p] += acc;
      }
    }
  }
}

// Log-signature from the support coefficients: the series is nested over the
// lower levels and the top level is evaluated only at the requested words.
class RestrictedLog {
 public:
  RestrictedLog(std::uint32_t d, std::uint32_t depth)
      : depth_(depth),
        lower_(d, depth - 1),
        support_(logsignature_support(d, depth)),
        lyndon_(build_lyndon(d, depth)) {
    for (std::size_t i = 0; i < lyndon_.size(); ++i) {
      const Word w = lyndon_.word(i);
      if (w.length < depth) {
        targets_.push_back({w, lower_.offset[w.length] + w.code, false});
      } else {
        targets_.push_back({w, *support_.index_of(w), true});
      }
    }
  }

  const WordSet& support() const noexcept { return support_; }
  const WordSet& lyndon() const noexcept { return lyndon_; }

  struct Workspace {
    std::vector<double> x;
    std::vector<std::vector<double>> t;  // t[k] for k = 1..depth
    std::vector<double> z;

    explicit Workspace(std::size_t size, std::uint32_t depth)
        : x(size), t(depth + 1, std::vector<double>(size)), z(size) {}
  };

  Workspace workspace() const { return Workspace(lower_.size(), depth_); }

  void forward(std::span<const double> support_row, Workspace& ws, std::span<double> out) const {
    const std::size_t lower_size = lower_.size();
    ws.x[0] = 0.0;
    for (std::size_t i = 1; i < lower_size; ++i) ws.x[i] = support_row[i - 1];

    std::fill(ws.t[depth_].begin(), ws.t[depth_].end(), 0.0);
    ws.t[depth_][0] = 1.0 / depth_;
    for (std::uint32_t k = depth_ - 1; k >= 1; --k) {
      detail::tensor_multiply(lower_, ws.x, ws.t[k + 1], ws.z);
      for (std::size_t i = 0; i < lower_size; ++i) ws.t[k][i] = -ws.z[i];
      ws.t[k][0] += 1.0 / k;
    }
    detail::tensor_multiply(lower_, ws.x, ws.t[1], ws.z);

    const auto& t1 = ws.t[1];
    for (std::size_t i = 0; i < targets_.size(); ++i) {
      const Target& target = targets_[i];
      if (!target.top) {
        out[i] = ws.z[target.index];
        continue;
      }
      double value = support_row[target.index];
      for (std::uint32_t p = 1; p < depth_; ++p) {
        const std::uint64_t split = lower_.power[depth_ - p];
        value += ws.x[lower_.offset[p] + target.word.code / split] *
                 t1[lower_.offset[depth_ - p] + target.word.code % split];
      }
      out[i] = value;
    }
  }

  /// Pulls gradients on the log coefficients back to the support
  /// coefficients. Requires the workspace state left by forward().
  void backward(std::span<const double> grad_out, const Workspace& ws,
                std::span<double> support_grad) const {
    const std::size_t lower_size = lower_.size();
    std::vector<double> x_bar(lower_size, 0.0);
    std::vector<double> t_bar(lower_size, 0.0);
    std::vector<double> next_bar(lower_size, 0.0);
    std::vector<double> z_bar(lower_size, 0.0);
    std::fill(support_grad.begin(), support_grad.end(), 0.0);

    const auto& t1 = ws.t[1];
    for (std::size_t i = 0; i < targets_.size(); ++i) {
      const Target& target = targets_[i];
      const double g = grad_out[i];
      if (!target.top) {
        z_bar[target.index] += g;
        continue;
      }
      support_grad[target.index] += g;
      for (std::uint32_t p = 1; p < depth_; ++p) {
        const std::uint64_t split = lower_.power[depth_ - p];
        const std::size_t pre = lower_.offset[p] + target.word.code / split;
        const std::size_t suf = lower_.offset[depth_ - p] + target.word.code % split;
        x_bar[pre] += g * t1[suf];
        t_bar[suf] += g * ws.x[pre];
      }
    }
    multiply_adjoint(lower_, ws.x, t1, z_bar, x_bar, t_bar);
    // t_k = 1/k - x ⊗ t_{k+1}
    for (std::uint32_t k = 1; k < depth_; ++k) {
      for (std::size_t i = 0; i < lower_size; ++i) z_bar[i] = -t_bar[i];
      z_bar[0] = 0.0;
      std::fill(next_bar.begin(), next_bar.end(), 0.0);
      multiply_adjoint(lower_, ws.x, ws.t[k + 1], z_bar, x_bar, next_bar);
      t_bar.swap(next_bar);
    }
    for (std::size_t i = 1; i < lower_size; ++i) support_grad[i - 1] += x_bar[i];
  }

 private:
  struct Target {
    Word word;
    std::size_t index;  // dense lower index, or support position when top
    bool top;
  };

  std::uint32_t depth_;
  detail::TruncatedLayout lower_;
  WordSet support_;
  WordSet lyndon_;
  std::vector<Target> targets_;
};

}  // namespace

CoefficientBatch tensor_log(const CoefficientBatch& signature) {
  const auto layout = detail::layout_for(signature.wordset(), "tensor_log");
  CoefficientBatch out(signature.wordset().with_empty(false), signature.batch());
  std::vector<double> dense(layout.size()), log(layout.size());
  for (std::size_t row = 0; row < signature.batch(); ++row) {
    detail::load_row(signature, row, dense);
    detail::tensor_log(layout, dense, log);
    detail::store_row(log, out, row);
  }
  return out;
}

WordSet logsignature_support(std::uint32_t d, std::uint32_t depth) {
  const WordSet lyndon = build_lyndon(d, depth);
  std::vector<Word> words;
  if (depth > 1) {
    const WordSet lower = build_truncated(d, depth - 1);
    words.assign(lower.words().begin(), lower.words().end());
  }
  for (const Word& w : lyndon.words()) {
    if (w.length == depth) words.push_back(w);
  }
  return WordSet::from_words(Alphabet{d}, std::move(words));
}

LogCoefficientBatch logsignature_forward(const PathBatch& paths, std::uint32_t depth,
                                         const ComputeOptions& options) {
  const RestrictedLog log(static_cast<std::uint32_t>(paths.channels()), depth);
  const CoefficientBatch sig = signature_forward(paths, log.support(), options);
  LogCoefficientBatch out(log.lyndon(), paths.batch());
  detail::parallel_for(paths.batch(), options.threads, [&](std::size_t b) {
    auto ws = log.workspace();
    log.forward(sig.row(b), ws, out.row(b));
  });
  return out;
}

std::vector<double> logsignature_backward(const PathBatch& paths, std::uint32_t depth,
                                          std::span<const double> grad_out,
                                          const BackwardOptions& options) {
  const RestrictedLog log(static_cast<std::uint32_t>(paths.channels()), depth);
  const std::size_t width = log.lyndon().size();
  if (grad_out.size() != paths.batch() * width) {
    throw Error(ErrorKind::Shape, "log-signature gradient has " + std::to_string(grad_out.size()) +
                                      " values, expected " +
                                      std::to_string(paths.batch() * width));
  }
  ComputeOptions forward_options;
  forward_options.threads = options.threads;
  const CoefficientBatch sig = signature_forward(paths, log.support(), forward_options);
  const std::size_t support_width = log.support().size();
  std::vector<double> upstream(paths.batch() * support_width, 0.0);
  detail::parallel_for(paths.batch(), options.threads, [&](std::size_t b) {
    auto ws = log.workspace();
    std::vector<double> scratch(width);
    log.forward(sig.row(b), ws, scratch);
    log.backward(grad_out.subspan(b * width, width), ws,
                 std::span<double>(upstream).subspan(b * support_width, support_width));
  });
  return signature_backward(paths, log.support(), upstream, options);
}

}  // namespace sigkit
