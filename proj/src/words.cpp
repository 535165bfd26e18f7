#include "sigkit/words.hpp"

#include <charconv>
#include <limits>

namespace sigkit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidLetter: return "invalid-letter";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Range: return "range";
    case ErrorKind::CorruptWord: return "corrupt-word";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Window: return "window";
    case ErrorKind::UnsupportedWordSet: return "unsupported-wordset";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

namespace {

using u128 = unsigned __int128;
constexpr u128 kCodeLimit = u128{1} << 64;  // codes must be < 2^64

// d^n as a 128-bit value; saturates above 2^64 so callers can compare.
u128 power128(std::uint32_t d, std::uint32_t n) {
  u128 p = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    p *= d;
    if (p > kCodeLimit) return kCodeLimit + 1;
  }
  return p;
}

void require_alphabet(Alphabet alphabet) {
  if (alphabet.size == 0) throw Error(ErrorKind::Domain, "alphabet size must be at least 1");
}

void require_valid(Word w, Alphabet alphabet) {
  require_alphabet(alphabet);
  if (w.length > max_code_length(alphabet)) {
    throw Error(ErrorKind::Capacity, "word length " + std::to_string(w.length) +
                                         " exceeds 64-bit code capacity for d=" +
                                         std::to_string(alphabet.size));
  }
  if (u128{w.code} >= power128(alphabet.size, w.length)) {
    throw Error(ErrorKind::CorruptWord, "code " + std::to_string(w.code) + " is not below d^" +
                                            std::to_string(w.length));
  }
}

}  // namespace

std::uint32_t bits_per_letter(Alphabet alphabet) noexcept {
  std::uint32_t b = 1;
  while (b < 32 && (std::uint64_t{1} << b) < alphabet.size) ++b;
  return b;
}

std::uint32_t max_code_length(Alphabet alphabet) noexcept {
  if (alphabet.size <= 1) return std::numeric_limits<std::uint32_t>::max();
  std::uint32_t n = 0;
  while (power128(alphabet.size, n + 1) <= kCodeLimit) ++n;
  return n;
}

std::uint32_t max_word_length(Alphabet alphabet) noexcept {
  const std::uint32_t by_packing = 64 / bits_per_letter(alphabet);
  const std::uint32_t by_code = max_code_length(alphabet);
  return by_packing < by_code ? by_packing : by_code;
}

std::uint64_t checked_power(Alphabet alphabet, std::uint32_t n) {
  const u128 p = power128(alphabet.size, n);
  if (p >= kCodeLimit) {
    throw Error(ErrorKind::Capacity, "d^n overflows 64 bits for d=" + std::to_string(alphabet.size) +
                                         ", n=" + std::to_string(n));
  }
  return static_cast<std::uint64_t>(p);
}

Word encode_word(std::span<const Letter> letters, Alphabet alphabet) {
  require_alphabet(alphabet);
  if (letters.size() > max_code_length(alphabet)) {
    throw Error(ErrorKind::Capacity, "word of length " + std::to_string(letters.size()) +
                                         " does not fit a 64-bit code for d=" +
                                         std::to_string(alphabet.size));
  }
  u128 code = 0;
  for (std::size_t j = 0; j < letters.size(); ++j) {
    if (letters[j] >= alphabet.size) {
      throw Error(ErrorKind::InvalidLetter, "letter " + std::to_string(letters[j] + 1) +
                                                " at position " + std::to_string(j + 1) +
                                                " exceeds alphabet size " +
                                                std::to_string(alphabet.size));
    }
    code = code * alphabet.size + letters[j];
  }
  return Word{static_cast<std::uint32_t>(letters.size()), static_cast<std::uint64_t>(code)};
}

std::vector<Letter> decode_word(Word w, Alphabet alphabet) {
  require_valid(w, alphabet);
  std::vector<Letter> letters(w.length);
  std::uint64_t code = w.code;
  for (std::uint32_t j = w.length; j-- > 0;) {
    letters[j] = static_cast<Letter>(code % alphabet.size);
    code /= alphabet.size;
  }
  return letters;
}

Word concat_code(Word u, Word v, Alphabet alphabet) {
  require_valid(u, alphabet);
  require_valid(v, alphabet);
  const std::uint64_t length = std::uint64_t{u.length} + v.length;
  if (length > max_code_length(alphabet)) {
    throw Error(ErrorKind::Capacity, "concatenation of length " + std::to_string(length) +
                                         " exceeds 64-bit code capacity");
  }
  const u128 code = u128{u.code} * power128(alphabet.size, v.length) + v.code;
  return Word{static_cast<std::uint32_t>(length), static_cast<std::uint64_t>(code)};
}

Word prefix_code(Word w, std::uint32_t k, Alphabet alphabet) {
  require_valid(w, alphabet);
  if (k > w.length) {
    throw Error(ErrorKind::Range, "prefix length " + std::to_string(k) + " exceeds word length " +
                                      std::to_string(w.length));
  }
  const u128 divisor = power128(alphabet.size, w.length - k);
  return Word{k, static_cast<std::uint64_t>(u128{w.code} / divisor)};
}

Word suffix_code(Word w, std::uint32_t m, Alphabet alphabet) {
  require_valid(w, alphabet);
  if (m > w.length) {
    throw Error(ErrorKind::Range, "suffix length " + std::to_string(m) + " exceeds word length " +
                                      std::to_string(w.length));
  }
  const u128 modulus = power128(alphabet.size, m);
  return Word{m, static_cast<std::uint64_t>(u128{w.code} % modulus)};
}

PackedWord pack_letters(Word w, Alphabet alphabet, std::uint32_t bits) {
  const std::uint32_t needed = bits_per_letter(alphabet);
  if (bits < needed || bits > 32) {
    throw Error(ErrorKind::Capacity, "bits per letter " + std::to_string(bits) +
                                         " cannot hold letters of alphabet size " +
                                         std::to_string(alphabet.size));
  }
  if (std::uint64_t{bits} * w.length > 64) {
    throw Error(ErrorKind::Capacity, "word of length " + std::to_string(w.length) + " at " +
                                         std::to_string(bits) + " bits per letter exceeds 64 bits");
  }
  const std::vector<Letter> letters = decode_word(w, alphabet);
  PackedWord packed{0, bits, w.length};
  for (std::uint32_t j = 0; j < w.length; ++j) {
    packed.bits |= std::uint64_t{letters[j]} << (bits * j);
  }
  return packed;
}

std::vector<Letter> unpack_letters(const PackedWord& packed) {
  std::vector<Letter> letters(packed.length);
  for (std::uint32_t j = 0; j < packed.length; ++j) letters[j] = packed.letter(j);
  return letters;
}

Word parse_word(std::string_view text, Alphabet alphabet) {
  if (text == "e") return Word{};
  std::vector<Letter> letters;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t dot = text.find('.', pos);
    const std::string_view token =
        text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
    unsigned long value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw Error(ErrorKind::Parse, "malformed word \"" + std::string(text) + "\"");
    }
    if (value == 0 || value > alphabet.size) {
      throw Error(ErrorKind::InvalidLetter, "letter " + std::to_string(value) + " in word \"" +
                                                std::string(text) + "\" is outside 1.." +
                                                std::to_string(alphabet.size));
    }
    letters.push_back(static_cast<Letter>(value - 1));
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return encode_word(letters, alphabet);
}

std::string format_letters(std::span<const Letter> letters) {
  if (letters.empty()) return "e";
  std::string out;
  for (std::size_t j = 0; j < letters.size(); ++j) {
    if (j) out += '.';
    out += std::to_string(letters[j] + 1);
  }
  return out;
}

std::string format_word(Word w, Alphabet alphabet) {
  const std::vector<Letter> letters = decode_word(w, alphabet);
  return format_letters(letters);
}

}  // namespace sigkit
