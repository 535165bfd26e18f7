#pragma once

#include <cstddef>

// Process-wide heap accounting. Linking sigkit_alloc replaces the global
// operator new/delete with counting versions.
namespace sigkit::alloc {

/// Bytes currently allocated through operator new.
std::size_t current_bytes() noexcept;
/// Highest value of current_bytes() since the last reset_peak().
std::size_t peak_bytes() noexcept;
/// Sets the peak to the current level.
void reset_peak() noexcept;
/// Number of operator new calls so far.
std::size_t allocation_count() noexcept;

/// Peak bytes above the level at construction, for a scoped measurement.
class PeakScope {
 public:
  PeakScope() noexcept : base_(current_bytes()) { reset_peak(); }
  std::size_t additional() const noexcept {
    const std::size_t p = peak_bytes();
    return p > base_ ? p - base_ : 0;
  }

 private:
  std::size_t base_;
};

}  // namespace sigkit::alloc
