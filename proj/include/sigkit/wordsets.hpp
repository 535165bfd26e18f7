#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sigkit/words.hpp"

namespace sigkit {

/// An immutable, canonically ordered set of nonempty words: the projection
/// index set. Order is (length, code) ascending and fixes the column layout
/// of every coefficient batch computed over the set.
///
/// Copies are cheap handles onto shared immutable tables, so a WordSet can be
/// held by value inside results and shared across threads.
class WordSet {
 public:
  /// Sentinel entries of the prefix/suffix tables.
  static constexpr std::uint32_t kEpsilon = 0xFFFFFFFEu;
  static constexpr std::uint32_t kAbsent = 0xFFFFFFFFu;

  /// Deduplicates and sorts. An empty word in the input turns on
  /// include_empty instead of becoming a column.
  static WordSet from_words(Alphabet alphabet, std::vector<Word> words);

  Alphabet alphabet() const noexcept { return impl_->alphabet; }
  std::size_t size() const noexcept { return impl_->words.size(); }
  std::span<const Word> words() const noexcept { return impl_->words; }
  const Word& word(std::size_t i) const { return impl_->words[i]; }
  const PackedWord& packed(std::size_t i) const { return impl_->packed[i]; }
  std::uint32_t bits_per_letter() const noexcept { return impl_->bits; }
  std::uint32_t max_length() const noexcept { return impl_->max_length; }

  /// Whether the ε coefficient (constant 1) is emitted as a leading column.
  bool include_empty() const noexcept { return impl_->include_empty; }
  WordSet with_empty(bool include) const;
  /// Number of output columns: size() plus one if include_empty().
  std::size_t width() const noexcept { return size() + (include_empty() ? 1 : 0); }

  std::optional<std::size_t> index_of(Word w) const;

  /// Position of w_[k] (k = 0..|w|): kEpsilon for k = 0, kAbsent when the
  /// prefix is not a member.
  std::uint32_t prefix_index(std::size_t i, std::uint32_t k) const;
  /// Position of the length-m suffix of word i, with the same sentinels.
  std::uint32_t suffix_index(std::size_t i, std::uint32_t m) const;

  bool is_prefix_closed() const noexcept { return impl_->prefix_closed; }
  /// True iff the set is every word of length 1..max_length().
  bool is_full_truncation() const noexcept { return impl_->full_truncation; }

  std::vector<Letter> letters(std::size_t i) const;
  std::string word_string(std::size_t i) const;
  /// Column headers, "e" first when include_empty().
  std::vector<std::string> column_names() const;

  friend bool operator==(const WordSet& a, const WordSet& b);

 private:
  struct Impl {
    Alphabet alphabet{1};
    std::vector<Word> words;
    std::vector<PackedWord> packed;
    std::vector<std::size_t> level_offset;  // first position of each length
    std::vector<std::size_t> table_offset;  // start of each word's row in the tables
    std::vector<std::uint32_t> prefix_table;
    std::vector<std::uint32_t> suffix_table;
    std::uint32_t bits = 1;
    std::uint32_t max_length = 0;
    bool include_empty = false;
    bool prefix_closed = false;
    bool full_truncation = false;
  };

  explicit WordSet(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

struct AnisotropyWeights {
  std::vector<double> gamma;
  double cutoff = 0.0;
};

/// Directed letter-adjacency constraints; an edge (i, j) lets letter i be
/// followed by letter j. Letters are 0-based.
struct GraphSpec {
  std::uint32_t nodes = 0;
  std::vector<std::pair<Letter, Letter>> edges;
};

inline constexpr double kAnisotropyTolerance = 1e-12;

WordSet build_truncated(std::uint32_t d, std::uint32_t depth);
WordSet build_anisotropic(const AnisotropyWeights& weights);
WordSet build_graph(const GraphSpec& graph, std::uint32_t depth);
WordSet build_lyndon(std::uint32_t d, std::uint32_t depth);
/// Words over the 2d-letter lead-lag alphabet (lag channels 0..d-1, lead
/// channels d..2d-1) generated by single lead letters and the pairs
/// (lag_i, lead_i), (lead_i, lag_i).
WordSet build_leadlag_sparse(std::uint32_t d, std::uint32_t depth);
WordSet build_custom(const std::vector<std::vector<Letter>>& words, std::uint32_t d);

/// Mirror of the JSON word-set descriptor used by the command line.
struct WordSetDescriptor {
  enum class Type { Truncated, Anisotropic, Graph, Lyndon, LeadLagSparse, Custom };

  Type type = Type::Truncated;
  std::uint32_t d = 0;
  std::uint32_t depth = 0;
  std::vector<double> gamma;
  double cutoff = 0.0;
  std::vector<std::pair<Letter, Letter>> edges;  // 0-based
  std::vector<std::vector<Letter>> words;        // 0-based
  bool include_empty = false;
};

WordSet build_wordset(const WordSetDescriptor& descriptor);

/// Sum of d^n for n = 1..depth, or a capacity error.
std::uint64_t truncated_size(std::uint32_t d, std::uint32_t depth);

}  // namespace sigkit
