#include <gtest/gtest.h>

#include <set>

#include "sigkit/wordsets.hpp"

using namespace sigkit;

namespace {

std::vector<std::string> names(const WordSet& ws) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ws.size(); ++i) out.push_back(ws.word_string(i));
  return out;
}

std::uint64_t witt(std::uint32_t d, std::uint32_t n) {
  auto mobius = [](std::uint32_t m) {
    int sign = 1;
    for (std::uint32_t p = 2; p * p <= m; ++p) {
      if (m % p == 0) {
        m /= p;
        if (m % p == 0) return 0;
        sign = -sign;
      }
    }
    if (m > 1) sign = -sign;
    return sign;
  };
  std::int64_t total = 0;
  for (std::uint32_t m = 1; m <= n; ++m) {
    if (n % m) continue;
    std::int64_t p = 1;
    for (std::uint32_t k = 0; k < n / m; ++k) p *= d;
    total += mobius(m) * p;
  }
  return static_cast<std::uint64_t>(total / n);
}

void check_contract(const WordSet& ws) {
  for (std::size_t i = 0; i + 1 < ws.size(); ++i) ASSERT_LT(ws.word(i), ws.word(i + 1));
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const Word w = ws.word(i);
    ASSERT_EQ(ws.prefix_index(i, 0), WordSet::kEpsilon);
    ASSERT_EQ(ws.prefix_index(i, w.length), i);
    for (std::uint32_t k = 1; k <= w.length; ++k) {
      const auto idx = ws.prefix_index(i, k);
      const auto expected = ws.index_of(prefix_code(w, k, ws.alphabet()));
      if (expected) {
        ASSERT_EQ(idx, *expected);
        ASSERT_EQ(ws.word(idx).length, k);
      } else {
        ASSERT_EQ(idx, WordSet::kAbsent);
      }
      const auto sidx = ws.suffix_index(i, k);
      const auto sexp = ws.index_of(suffix_code(w, k, ws.alphabet()));
      ASSERT_EQ(sidx, sexp ? static_cast<std::uint32_t>(*sexp) : WordSet::kAbsent);
    }
  }
}

}  // namespace

TEST(Truncated, Sizes) {
  EXPECT_EQ(build_truncated(6, 3).size(), 258u);
  EXPECT_EQ(build_truncated(8, 6).size(), 299592u);
  EXPECT_EQ(names(build_truncated(2, 1)), (std::vector<std::string>{"1", "2"}));
  EXPECT_TRUE(build_truncated(3, 3).is_full_truncation());
  EXPECT_EQ(truncated_size(8, 6), 299592u);
  EXPECT_THROW(build_truncated(2, 65), Error);
  check_contract(build_truncated(3, 3));
}

TEST(Anisotropic, Examples) {
  EXPECT_EQ(names(build_anisotropic({{1, 2}, 3})),
            (std::vector<std::string>{"1", "2", "1.1", "1.2", "2.1", "1.1.1"}));
  EXPECT_EQ(build_anisotropic({{1, 1, 1}, 3}), build_truncated(3, 3));
  EXPECT_EQ(names(build_anisotropic({{1, 5}, 1})), (std::vector<std::string>{"1"}));
  EXPECT_THROW(build_anisotropic({{1, 0}, 2}), Error);
  EXPECT_THROW(build_anisotropic({{1, 1}, -1}), Error);
}

TEST(Anisotropic, IntegerWeightsExact) {
  const std::vector<double> gamma{1, 2, 3};
  const auto ws = build_anisotropic({gamma, 5});
  const auto full = build_truncated(3, 5);
  for (std::size_t i = 0; i < full.size(); ++i) {
    double deg = 0;
    for (Letter a : full.letters(i)) deg += gamma[a];
    EXPECT_EQ(ws.index_of(full.word(i)).has_value(), deg <= 5);
  }
  check_contract(ws);
  EXPECT_TRUE(ws.is_prefix_closed());
}

TEST(Graph, Examples) {
  EXPECT_EQ(names(build_graph({2, {{0, 1}}}, 2)), (std::vector<std::string>{"1", "2", "1.2"}));
  EXPECT_EQ(build_graph({2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}}, 3), build_truncated(2, 3));
  EXPECT_EQ(names(build_graph({2, {{0, 0}, {0, 1}, {1, 1}}}, 2)),
            (std::vector<std::string>{"1", "2", "1.1", "1.2", "2.2"}));
  EXPECT_THROW(build_graph({2, {{0, 2}}}, 2), Error);
}

TEST(Graph, PrefixClosed) {
  const auto ws = build_graph({4, {{0, 1}, {1, 2}, {2, 0}, {3, 3}, {1, 3}}}, 5);
  EXPECT_TRUE(ws.is_prefix_closed());
  check_contract(ws);
}

TEST(Lyndon, ExamplesAndWitt) {
  EXPECT_EQ(build_lyndon(6, 3).size(), 91u);
  EXPECT_EQ(build_lyndon(4, 6).size(), 964u);
  EXPECT_EQ(names(build_lyndon(2, 3)), (std::vector<std::string>{"1", "2", "1.2", "1.1.2", "1.2.2"}));
  for (std::uint32_t d = 1; d <= 10; ++d) {
    for (std::uint32_t n = 1; n <= 8; ++n) {
      std::uint64_t expected = 0;
      for (std::uint32_t k = 1; k <= n; ++k) expected += witt(d, k);
      if (d <= 6 || n <= 6) {
        ASSERT_EQ(build_lyndon(d, n).size(), expected) << d << "," << n;
      }
    }
  }
}

TEST(Lyndon, LargeAlphabetCount) {
  std::uint64_t expected = 0;
  for (std::uint32_t k = 1; k <= 8; ++k) expected += witt(10, k);
  EXPECT_EQ(build_lyndon(10, 8).size(), expected);
}

TEST(LeadLagSparse, Examples) {
  // lead-lag alphabet for d=1: letter 1 = lag, letter 2 = lead
  EXPECT_EQ(names(build_leadlag_sparse(1, 2)), (std::vector<std::string>{"2", "1.2", "2.1", "2.2"}));
  EXPECT_EQ(names(build_leadlag_sparse(1, 1)), (std::vector<std::string>{"2"}));
  EXPECT_EQ(build_leadlag_sparse(2, 2).alphabet().size, 4u);
}

TEST(LeadLagSparse, MatchesGeneratorEnumeration) {
  for (std::uint32_t d = 1; d <= 3; ++d) {
    for (std::uint32_t depth = 1; depth <= 5; ++depth) {
      std::vector<std::vector<Letter>> gens;
      for (Letter i = 0; i < d; ++i) {
        gens.push_back({d + i});
        gens.push_back({i, d + i});
        gens.push_back({d + i, i});
      }
      std::set<std::vector<Letter>> found;
      std::vector<std::vector<Letter>> frontier{{}};
      while (!frontier.empty()) {
        std::vector<std::vector<Letter>> next;
        for (const auto& w : frontier) {
          for (const auto& g : gens) {
            auto v = w;
            v.insert(v.end(), g.begin(), g.end());
            if (v.size() <= depth && found.insert(v).second) next.push_back(v);
          }
        }
        frontier = std::move(next);
      }
      const auto ws = build_leadlag_sparse(d, depth);
      ASSERT_EQ(ws.size(), found.size());
      for (const auto& w : found) ASSERT_TRUE(ws.index_of(encode_word(w, Alphabet{2 * d})));
      check_contract(ws);
    }
  }
  EXPECT_EQ(build_leadlag_sparse(2, 2).size(), 10u);
}

TEST(Custom, Examples) {
  EXPECT_EQ(build_custom({{0}, {0, 1}, {0, 1}, {2}}, 3).size(), 3u);
  const auto only = build_custom({{1, 0}}, 2);
  EXPECT_EQ(only.size(), 1u);
  EXPECT_EQ(only.prefix_index(0, 1), WordSet::kAbsent);
  EXPECT_FALSE(only.is_prefix_closed());
  EXPECT_EQ(build_custom({{0}, {1}, {0, 0}, {0, 1}, {1, 0}, {1, 1}}, 2), build_truncated(2, 2));
  EXPECT_THROW(build_custom({}, 2), Error);
  try {
    build_custom({{0, 3}}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidLetter);
  }
  const auto with_e = build_custom({{}, {1}}, 2);
  EXPECT_TRUE(with_e.include_empty());
  EXPECT_EQ(with_e.width(), 2u);
  check_contract(build_custom({{2, 1, 0}, {1}, {2, 1}, {0, 2, 2, 2}}, 3));
}

TEST(WordSet, ColumnsAndDescriptor) {
  const auto ws = build_truncated(2, 2).with_empty(true);
  EXPECT_EQ(ws.column_names(), (std::vector<std::string>{"e", "1", "2", "1.1", "1.2", "2.1", "2.2"}));
  WordSetDescriptor desc;
  desc.type = WordSetDescriptor::Type::Lyndon;
  desc.d = 6;
  desc.depth = 3;
  EXPECT_EQ(build_wordset(desc).size(), 91u);
  desc.type = WordSetDescriptor::Type::Custom;
  desc.d = 2;
  desc.words = {{0, 1}};
  desc.include_empty = true;
  EXPECT_EQ(build_wordset(desc).width(), 2u);
}
