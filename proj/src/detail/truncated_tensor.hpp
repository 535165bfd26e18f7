#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sigkit/path.hpp"

namespace sigkit::detail {

/// Index arithmetic for elements of the truncated tensor algebra stored as
/// [ε, level 1 words, level 2 words, ...] with words in code order; the
/// entry of word (n, code) lives at offset[n] + code.
struct TruncatedLayout {
  std::uint32_t d = 1;
  std::uint32_t depth = 0;
  std::vector<std::size_t> offset;      // offset[n] for n = 0..depth+1
  std::vector<std::uint64_t> power;     // d^n for n = 0..depth

  TruncatedLayout(std::uint32_t alphabet, std::uint32_t max_depth);

  std::size_t size() const noexcept { return offset.back(); }
  std::size_t level_size(std::uint32_t n) const noexcept { return offset[n + 1] - offset[n]; }
};

/// out = a ⊗ b truncated at layout.depth. a and b may alias each other but
/// not out.
void tensor_multiply(const TruncatedLayout& layout, std::span<const double> a,
                     std::span<const double> b, std::span<double> out);

/// Inverse of an element with unit constant term, solved level by level.
void tensor_inverse(const TruncatedLayout& layout, std::span<const double> a,
                    std::span<double> out);

/// Tensor logarithm of an element with unit constant term.
void tensor_log(const TruncatedLayout& layout, std::span<const double> a, std::span<double> out);

/// Requires a full truncation and returns its layout.
TruncatedLayout layout_for(const WordSet& ws, const char* operation);

/// Copies row b of a batch into a dense element (ε = 1 prepended).
void load_row(const CoefficientBatch& batch, std::size_t b, std::span<double> dense);
/// Writes the non-ε part of a dense element into row b.
void store_row(std::span<const double> dense, CoefficientBatch& batch, std::size_t b);

}  // namespace sigkit::detail
