#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigkit/error.hpp"

namespace sigkit {

/// Letters are 0-based internally. Text I/O is 1-based.
using Letter = std::uint32_t;

struct Alphabet {
  std::uint32_t size = 0;

  explicit constexpr Alphabet(std::uint32_t d) : size(d) {}
  friend constexpr bool operator==(Alphabet, Alphabet) = default;
};

/// A word stored as its length and base-d integer code.
///
/// Codes of equal-length words compare in lexicographic order of their
/// letters, so (length, code) is the canonical ordering used everywhere.
struct Word {
  std::uint32_t length = 0;
  std::uint64_t code = 0;

  constexpr bool empty() const noexcept { return length == 0; }
  friend constexpr auto operator<=>(const Word&, const Word&) = default;
};

/// Letters packed at a fixed number of bits each; letter j sits at bit b*j.
struct PackedWord {
  std::uint64_t bits = 0;
  std::uint32_t bits_per_letter = 1;
  std::uint32_t length = 0;

  constexpr Letter letter(std::uint32_t j) const noexcept {
    const std::uint64_t mask = (bits_per_letter >= 64)
                                   ? ~std::uint64_t{0}
                                   : ((std::uint64_t{1} << bits_per_letter) - 1);
    return static_cast<Letter>((bits >> (bits_per_letter * j)) & mask);
  }
};

/// Smallest b with 2^b >= d, but at least 1.
std::uint32_t bits_per_letter(Alphabet alphabet) noexcept;

/// Longest word length whose code fits in 64 bits, i.e. d^n - 1 <= 2^64 - 1.
std::uint32_t max_code_length(Alphabet alphabet) noexcept;

/// Longest word length usable by a word set: bounded by both the code width
/// and by packing at bits_per_letter(d) bits per letter.
std::uint32_t max_word_length(Alphabet alphabet) noexcept;

/// d^n, throwing a capacity error if it does not fit in 64 bits.
std::uint64_t checked_power(Alphabet alphabet, std::uint32_t n);

Word encode_word(std::span<const Letter> letters, Alphabet alphabet);
std::vector<Letter> decode_word(Word w, Alphabet alphabet);

Word concat_code(Word u, Word v, Alphabet alphabet);
Word prefix_code(Word w, std::uint32_t k, Alphabet alphabet);
Word suffix_code(Word w, std::uint32_t m, Alphabet alphabet);

PackedWord pack_letters(Word w, Alphabet alphabet, std::uint32_t bits);
std::vector<Letter> unpack_letters(const PackedWord& packed);

/// Parses "1.2.2" (1-based letters) or "e" for the empty word.
Word parse_word(std::string_view text, Alphabet alphabet);
std::string format_word(Word w, Alphabet alphabet);
std::string format_letters(std::span<const Letter> letters);

}  // namespace sigkit
