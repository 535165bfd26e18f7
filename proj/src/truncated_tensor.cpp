#include "detail/truncated_tensor.hpp"

#include <algorithm>
#include <string>

namespace sigkit::detail {

TruncatedLayout::TruncatedLayout(std::uint32_t alphabet, std::uint32_t max_depth)
    : d(alphabet), depth(max_depth), offset(max_depth + 2, 0), power(max_depth + 1, 1) {
  offset[0] = 0;
  offset[1] = 1;
  for (std::uint32_t n = 1; n <= depth; ++n) {
    power[n] = power[n - 1] * d;
    offset[n + 1] = offset[n] + power[n];
  }
}

void tensor_multiply(const TruncatedLayout& layout, std::span<const double> a,
                     std::span<const double> b, std::span<double> out) {
  for (std::uint32_t n = 0; n <= layout.depth; ++n) {
    double* dst = out.data() + layout.offset[n];
    const std::uint64_t count = layout.power[n];
    std::fill(dst, dst + count, 0.0);
    // Split each level-n word as (prefix of length k) ∘ (suffix of length n-k);
    // iterating prefix-major walks dst contiguously.
    for (std::uint32_t k = 0; k <= n; ++k) {
      const double* left = a.data() + layout.offset[k];
      const double* right = b.data() + layout.offset[n - k];
      const std::uint64_t right_count = layout.power[n - k];
      for (std::uint64_t p = 0; p < layout.power[k]; ++p) {
        const double lp = left[p];
        if (lp == 0.0) continue;
        double* row = dst + p * right_count;
        for (std::uint64_t s = 0; s < right_count; ++s) row[s] += lp * right[s];
      }
    }
  }
}

void tensor_inverse(const TruncatedLayout& layout, std::span<const double> a,
                    std::span<double> out) {
  // a ⊗ out = 1 gives out(w) = -sum_{k>=1} a(w[..k]) out(w[k..]) at every level >= 1.
  out[0] = 1.0;
  for (std::uint32_t n = 1; n <= layout.depth; ++n) {
    double* dst = out.data() + layout.offset[n];
    std::fill(dst, dst + layout.power[n], 0.0);
    for (std::uint32_t k = 1; k <= n; ++k) {
      const double* left = a.data() + layout.offset[k];
      const double* right = out.data() + layout.offset[n - k];
      const std::uint64_t right_count = layout.power[n - k];
      for (std::uint64_t p = 0; p < layout.power[k]; ++p) {
        const double lp = left[p];
        if (lp == 0.0) continue;
        double* row = dst + p * right_count;
        for (std::uint64_t s = 0; s < right_count; ++s) row[s] -= lp * right[s];
      }
    }
  }
}

void tensor_log(const TruncatedLayout& layout, std::span<const double> a, std::span<double> out) {
  // log(1 + x) = x ⊗ (1 - x ⊗ (1/2 - x ⊗ (1/3 - ... x ⊗ (1/N)))).
  const std::size_t size = layout.size();
  const std::uint32_t depth = layout.depth;
  std::vector<double> x(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(size));
  x[0] = 0.0;
  std::vector<double> t(size, 0.0);
  std::vector<double> product(size, 0.0);
  t[0] = 1.0 / depth;
  for (std::uint32_t k = depth - 1; k >= 1; --k) {
    tensor_multiply(layout, x, t, product);
    for (std::size_t i = 0; i < size; ++i) t[i] = -product[i];
    t[0] += 1.0 / k;
  }
  tensor_multiply(layout, x, t, out);
}

TruncatedLayout layout_for(const WordSet& ws, const char* operation) {
  if (!ws.is_full_truncation()) {
    throw Error(ErrorKind::UnsupportedWordSet,
                std::string(operation) + " requires a fully truncated word set");
  }
  return TruncatedLayout(ws.alphabet().size, ws.max_length());
}

void load_row(const CoefficientBatch& batch, std::size_t b, std::span<double> dense) {
  dense[0] = 1.0;
  const std::size_t n = batch.wordset().size();
  for (std::size_t i = 0; i < n; ++i) dense[i + 1] = batch.coefficient(b, i);
}

void store_row(std::span<const double> dense, CoefficientBatch& batch, std::size_t b) {
  const std::size_t n = batch.wordset().size();
  for (std::size_t i = 0; i < n; ++i) batch.coefficient(b, i) = dense[i + 1];
  if (batch.wordset().include_empty()) batch.row(b)[0] = 1.0;
}

}  // namespace sigkit::detail
