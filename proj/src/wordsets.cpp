#include "sigkit/wordsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace sigkit {

namespace {

constexpr std::size_t kMaxWords = WordSet::kEpsilon - 1;

std::vector<std::uint64_t> powers_up_to(Alphabet alphabet, std::uint32_t n) {
  std::vector<std::uint64_t> p(n + 1, 1);
  for (std::uint32_t k = 1; k <= n; ++k) p[k] = p[k - 1] * alphabet.size;
  return p;
}

bool code_fits(Word w, Alphabet alphabet) {
  unsigned __int128 limit = 1;
  for (std::uint32_t k = 0; k < w.length && limit <= w.code; ++k) limit *= alphabet.size;
  return w.code < limit;
}

void require_depth(std::uint32_t d, std::uint32_t depth) {
  if (d == 0) throw Error(ErrorKind::Domain, "alphabet size must be at least 1");
  if (depth == 0) throw Error(ErrorKind::Domain, "depth must be at least 1");
  const std::uint32_t limit = max_word_length(Alphabet{d});
  if (depth > limit) {
    throw Error(ErrorKind::Capacity, "depth " + std::to_string(depth) +
                                         " exceeds the maximum word length " +
                                         std::to_string(limit) + " for d=" + std::to_string(d));
  }
}

}  // namespace

std::uint64_t truncated_size(std::uint32_t d, std::uint32_t depth) {
  std::uint64_t total = 0;
  std::uint64_t level = 1;
  for (std::uint32_t n = 1; n <= depth; ++n) {
    if (__builtin_mul_overflow(level, std::uint64_t{d}, &level) ||
        __builtin_add_overflow(total, level, &total)) {
      throw Error(ErrorKind::Capacity, "truncated word set for d=" + std::to_string(d) +
                                           ", depth=" + std::to_string(depth) +
                                           " is too large to index");
    }
  }
  return total;
}

WordSet WordSet::from_words(Alphabet alphabet, std::vector<Word> words) {
  if (alphabet.size == 0) throw Error(ErrorKind::Domain, "alphabet size must be at least 1");
  auto impl = std::make_shared<Impl>();
  impl->alphabet = alphabet;
  impl->bits = sigkit::bits_per_letter(alphabet);

  const std::uint32_t length_limit = max_word_length(alphabet);
  for (const Word& w : words) {
    if (w.length > length_limit) {
      throw Error(ErrorKind::Capacity, "word of length " + std::to_string(w.length) +
                                           " exceeds the maximum supported length " +
                                           std::to_string(length_limit) + " for d=" +
                                           std::to_string(alphabet.size));
    }
    if (!code_fits(w, alphabet)) {
      throw Error(ErrorKind::CorruptWord, "word code " + std::to_string(w.code) +
                                              " is not below d^" + std::to_string(w.length));
    }
  }

  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  if (!words.empty() && words.front().empty()) {
    impl->include_empty = true;
    words.erase(words.begin());
  }
  if (words.empty()) throw Error(ErrorKind::Domain, "word set must contain a nonempty word");
  if (words.size() > kMaxWords) {
    throw Error(ErrorKind::Capacity, "word set has too many words to index");
  }

  impl->max_length = words.back().length;
  impl->words = std::move(words);
  const auto& ws = impl->words;

  impl->level_offset.assign(impl->max_length + 2, 0);
  {
    std::size_t pos = 0;
    for (std::uint32_t n = 0; n <= impl->max_length + 1; ++n) {
      while (pos < ws.size() && ws[pos].length < n) ++pos;
      impl->level_offset[n] = pos;
    }
  }

  // Unique words with lengths 1..max are the full truncation iff the count matches.
  impl->full_truncation = false;
  try {
    impl->full_truncation = ws.size() == truncated_size(alphabet.size, impl->max_length);
  } catch (const Error&) {
  }

  impl->packed.reserve(ws.size());
  for (const Word& w : ws) impl->packed.push_back(pack_letters(w, alphabet, impl->bits));

  impl->table_offset.resize(ws.size() + 1);
  impl->table_offset[0] = 0;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    impl->table_offset[i + 1] = impl->table_offset[i] + ws[i].length + 1;
  }
  impl->prefix_table.resize(impl->table_offset.back());
  impl->suffix_table.resize(impl->table_offset.back());

  WordSet result(impl);
  const auto powers = powers_up_to(alphabet, impl->max_length);
  bool closed = true;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const Word w = ws[i];
    std::uint32_t* prefix_row = impl->prefix_table.data() + impl->table_offset[i];
    std::uint32_t* suffix_row = impl->suffix_table.data() + impl->table_offset[i];
    prefix_row[0] = kEpsilon;
    suffix_row[0] = kEpsilon;
    prefix_row[w.length] = static_cast<std::uint32_t>(i);
    suffix_row[w.length] = static_cast<std::uint32_t>(i);
    for (std::uint32_t k = 1; k < w.length; ++k) {
      const auto p = result.index_of(Word{k, w.code / powers[w.length - k]});
      const auto s = result.index_of(Word{k, w.code % powers[k]});
      prefix_row[k] = p ? static_cast<std::uint32_t>(*p) : kAbsent;
      suffix_row[k] = s ? static_cast<std::uint32_t>(*s) : kAbsent;
      closed = closed && p.has_value();
    }
  }
  impl->prefix_closed = closed;
  return result;
}

WordSet WordSet::with_empty(bool include) const {
  if (include == impl_->include_empty) return *this;
  auto copy = std::make_shared<Impl>(*impl_);
  copy->include_empty = include;
  return WordSet(std::move(copy));
}

std::optional<std::size_t> WordSet::index_of(Word w) const {
  const Impl& s = *impl_;
  if (w.length == 0 || w.length > s.max_length) return std::nullopt;
  if (s.full_truncation) {
    const std::size_t pos = s.level_offset[w.length] + w.code;
    if (pos < s.level_offset[w.length + 1]) return pos;
    return std::nullopt;
  }
  const auto first = s.words.begin() + static_cast<std::ptrdiff_t>(s.level_offset[w.length]);
  const auto last = s.words.begin() + static_cast<std::ptrdiff_t>(s.level_offset[w.length + 1]);
  const auto it = std::lower_bound(first, last, w);
  if (it != last && *it == w) return static_cast<std::size_t>(it - s.words.begin());
  return std::nullopt;
}

std::uint32_t WordSet::prefix_index(std::size_t i, std::uint32_t k) const {
  if (k > impl_->words.at(i).length) {
    throw Error(ErrorKind::Range, "prefix length exceeds word length");
  }
  return impl_->prefix_table[impl_->table_offset[i] + k];
}

std::uint32_t WordSet::suffix_index(std::size_t i, std::uint32_t m) const {
  if (m > impl_->words.at(i).length) {
    throw Error(ErrorKind::Range, "suffix length exceeds word length");
  }
  return impl_->suffix_table[impl_->table_offset[i] + m];
}

std::vector<Letter> WordSet::letters(std::size_t i) const { return unpack_letters(packed(i)); }

std::string WordSet::word_string(std::size_t i) const {
  const auto ls = letters(i);
  return format_letters(ls);
}

std::vector<std::string> WordSet::column_names() const {
  std::vector<std::string> names;
  names.reserve(width());
  if (include_empty()) names.emplace_back("e");
  for (std::size_t i = 0; i < size(); ++i) names.push_back(word_string(i));
  return names;
}

bool operator==(const WordSet& a, const WordSet& b) {
  return a.alphabet() == b.alphabet() && a.include_empty() == b.include_empty() &&
         std::equal(a.words().begin(), a.words().end(), b.words().begin(), b.words().end());
}

WordSet build_truncated(std::uint32_t d, std::uint32_t depth) {
  require_depth(d, depth);
  const Alphabet alphabet{d};
  const std::uint64_t total = truncated_size(d, depth);
  if (total > kMaxWords) throw Error(ErrorKind::Capacity, "truncated word set is too large");
  std::vector<Word> words;
  words.reserve(total);
  std::uint64_t count = 1;
  for (std::uint32_t n = 1; n <= depth; ++n) {
    count *= d;
    for (std::uint64_t c = 0; c < count; ++c) words.push_back(Word{n, c});
  }
  return WordSet::from_words(alphabet, std::move(words));
}

WordSet build_anisotropic(const AnisotropyWeights& weights) {
  const auto& gamma = weights.gamma;
  if (gamma.empty()) throw Error(ErrorKind::Domain, "anisotropic weights must be nonempty");
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (!(gamma[i] > 0.0) || !std::isfinite(gamma[i])) {
      throw Error(ErrorKind::Domain, "weight for channel " + std::to_string(i + 1) +
                                         " must be positive and finite");
    }
  }
  if (!(weights.cutoff > 0.0) || !std::isfinite(weights.cutoff)) {
    throw Error(ErrorKind::Domain, "anisotropic cutoff must be positive and finite");
  }
  const auto d = static_cast<std::uint32_t>(gamma.size());
  const Alphabet alphabet{d};
  const double limit = weights.cutoff + kAnisotropyTolerance;
  const double min_gamma = *std::min_element(gamma.begin(), gamma.end());
  const double longest = std::floor(limit / min_gamma);
  if (longest > static_cast<double>(max_word_length(alphabet))) {
    throw Error(ErrorKind::Capacity, "anisotropic cutoff admits words longer than the maximum " +
                                         std::to_string(max_word_length(alphabet)));
  }

  std::vector<Word> words;
  std::vector<Letter> stack;
  // Depth-first over extensions; degree grows monotonically so pruning is exact.
  auto visit = [&](auto&& self, double degree) -> void {
    for (Letter a = 0; a < d; ++a) {
      const double next = degree + gamma[a];
      if (next > limit) continue;
      stack.push_back(a);
      words.push_back(encode_word(stack, alphabet));
      if (words.size() > kMaxWords) throw Error(ErrorKind::Capacity, "anisotropic set too large");
      self(self, next);
      stack.pop_back();
    }
  };
  visit(visit, 0.0);
  if (words.empty()) {
    throw Error(ErrorKind::Domain, "no word has weighted degree within the cutoff");
  }
  return WordSet::from_words(alphabet, std::move(words));
}

WordSet build_graph(const GraphSpec& graph, std::uint32_t depth) {
  require_depth(graph.nodes, depth);
  const std::uint32_t d = graph.nodes;
  std::vector<std::vector<Letter>> next(d);
  for (const auto& [from, to] : graph.edges) {
    if (from >= d || to >= d) {
      throw Error(ErrorKind::InvalidLetter, "edge (" + std::to_string(from + 1) + "," +
                                                std::to_string(to + 1) +
                                                ") references a node outside 1.." +
                                                std::to_string(d));
    }
    next[from].push_back(to);
  }
  for (auto& targets : next) {
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  }

  const Alphabet alphabet{d};
  std::vector<Word> words;
  std::vector<Letter> stack;
  auto visit = [&](auto&& self) -> void {
    words.push_back(encode_word(stack, alphabet));
    if (words.size() > kMaxWords) throw Error(ErrorKind::Capacity, "graph word set too large");
    if (stack.size() == depth) return;
    for (Letter b : next[stack.back()]) {
      stack.push_back(b);
      self(self);
      stack.pop_back();
    }
  };
  for (Letter a = 0; a < d; ++a) {
    stack.assign(1, a);
    visit(visit);
  }
  return WordSet::from_words(alphabet, std::move(words));
}

WordSet build_lyndon(std::uint32_t d, std::uint32_t depth) {
  require_depth(d, depth);
  const Alphabet alphabet{d};
  std::vector<Word> words;
  // Duval's generation: emits every Lyndon word of length <= depth in lexicographic order.
  std::vector<Letter> w{0};
  while (!w.empty()) {
    words.push_back(encode_word(w, alphabet));
    if (words.size() > kMaxWords) throw Error(ErrorKind::Capacity, "Lyndon word set too large");
    const std::size_t period = w.size();
    while (w.size() < depth) w.push_back(w[w.size() - period]);
    while (!w.empty() && w.back() == d - 1) w.pop_back();
    if (!w.empty()) ++w.back();
  }
  return WordSet::from_words(alphabet, std::move(words));
}

WordSet build_leadlag_sparse(std::uint32_t d, std::uint32_t depth) {
  if (d == 0) throw Error(ErrorKind::Domain, "underlying dimension must be at least 1");
  require_depth(2 * d, depth);
  const Alphabet alphabet{2 * d};
  std::vector<std::vector<Letter>> generators;
  for (Letter i = 0; i < d; ++i) generators.push_back({d + i});
  for (Letter i = 0; i < d; ++i) {
    generators.push_back({i, d + i});
    generators.push_back({d + i, i});
  }

  // by_length[n] holds every generator product of length exactly n.
  std::vector<std::set<std::vector<Letter>>> by_length(depth + 1);
  by_length[0].emplace();
  for (std::uint32_t n = 1; n <= depth; ++n) {
    for (const auto& g : generators) {
      if (g.size() > n) continue;
      for (const auto& tail : by_length[n - g.size()]) {
        std::vector<Letter> word = g;
        word.insert(word.end(), tail.begin(), tail.end());
        by_length[n].insert(std::move(word));
      }
    }
  }
  std::vector<Word> words;
  for (std::uint32_t n = 1; n <= depth; ++n) {
    for (const auto& letters : by_length[n]) words.push_back(encode_word(letters, alphabet));
  }
  return WordSet::from_words(alphabet, std::move(words));
}

WordSet build_custom(const std::vector<std::vector<Letter>>& words, std::uint32_t d) {
  if (d == 0) throw Error(ErrorKind::Domain, "alphabet size must be at least 1");
  if (words.empty()) throw Error(ErrorKind::Domain, "custom word list is empty");
  const Alphabet alphabet{d};
  std::vector<Word> encoded;
  encoded.reserve(words.size());
  for (const auto& letters : words) encoded.push_back(encode_word(letters, alphabet));
  return WordSet::from_words(alphabet, std::move(encoded));
}

WordSet build_wordset(const WordSetDescriptor& desc) {
  WordSet ws = [&] {
    using Type = WordSetDescriptor::Type;
    switch (desc.type) {
      case Type::Truncated: return build_truncated(desc.d, desc.depth);
      case Type::Anisotropic: {
        if (desc.d != 0 && desc.gamma.size() != desc.d) {
          throw Error(ErrorKind::Domain, "gamma has " + std::to_string(desc.gamma.size()) +
                                             " entries but d=" + std::to_string(desc.d));
        }
        return build_anisotropic(AnisotropyWeights{desc.gamma, desc.cutoff});
      }
      case Type::Graph: return build_graph(GraphSpec{desc.d, desc.edges}, desc.depth);
      case Type::Lyndon: return build_lyndon(desc.d, desc.depth);
      case Type::LeadLagSparse: return build_leadlag_sparse(desc.d, desc.depth);
      case Type::Custom: return build_custom(desc.words, desc.d);
    }
    throw Error(ErrorKind::Domain, "unknown word set type");
  }();
  return desc.include_empty ? ws.with_empty(true) : ws;
}

}  // namespace sigkit
