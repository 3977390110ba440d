#include "indeval/aggregation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "indeval/error.hpp"

namespace indeval {
namespace {

const LabelAlphabet kAB({Label("A"), Label("B")});
const LabelAlphabet kABC({Label("A"), Label("B"), Label("C")});

std::vector<RatingRecord> ratings(std::string_view responses) {
  std::vector<RatingRecord> out;
  for (char c : responses) out.push_back({"r" + std::to_string(out.size()), Label(std::string(1, c))});
  return out;
}

TEST(PluralityGoldLabel, ClearMajority) {
  const auto g = plurality_gold_label(ratings("AAB"), kAB);
  EXPECT_EQ(g.label, Label("A"));
  EXPECT_DOUBLE_EQ(g.support, 2.0 / 3.0);
  EXPECT_FALSE(g.tie_broken);
}

TEST(PluralityGoldLabel, TieGoesToEarliestAlphabetEntry) {
  const auto g = plurality_gold_label(ratings("BA"), kAB);
  EXPECT_EQ(g.label, Label("A"));
  EXPECT_DOUBLE_EQ(g.support, 0.5);
  EXPECT_TRUE(g.tie_broken);

  const LabelAlphabet reversed({Label("B"), Label("A")});
  EXPECT_EQ(plurality_gold_label(ratings("AB"), reversed).label, Label("B"));
}

TEST(PluralityGoldLabel, Unanimous) {
  const auto g = plurality_gold_label(ratings("BBB"), kAB);
  EXPECT_EQ(g.label, Label("B"));
  EXPECT_DOUBLE_EQ(g.support, 1.0);
  EXPECT_FALSE(g.tie_broken);
}

TEST(PluralityGoldLabel, Errors) {
  EXPECT_THROW((void)plurality_gold_label({}, kAB), std::invalid_argument);
  EXPECT_THROW((void)plurality_gold_label(ratings("AC"), kAB), DataError);
}

// Argmax by brute force over counts, permutation and duplication invariance.
TEST(PluralityGoldLabel, Properties) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    std::string responses;
    const std::size_t n = 1 + rng() % 9;
    for (std::size_t i = 0; i < n; ++i) responses += char('A' + rng() % 3);
    auto rs = ratings(responses);
    const auto g = plurality_gold_label(rs, kABC);

    const auto count = [&](char c) { return std::count(responses.begin(), responses.end(), c); };
    const auto best = std::max({count('A'), count('B'), count('C')});
    EXPECT_EQ(count(g.label.str()[0]), best);
    EXPECT_DOUBLE_EQ(g.support, agreement_score(std::span<const RatingRecord>(rs)));
    const auto n_max = (count('A') == best) + (count('B') == best) + (count('C') == best);
    EXPECT_EQ(g.tie_broken, n_max >= 2);

    std::shuffle(rs.begin(), rs.end(), rng);
    EXPECT_EQ(plurality_gold_label(rs, kABC), g);

    auto doubled = rs;
    doubled.insert(doubled.end(), rs.begin(), rs.end());
    const auto g2 = plurality_gold_label(doubled, kABC);
    EXPECT_EQ(g2.label, g.label);
    EXPECT_EQ(g2.support, g.support);
  }
}

TEST(SoftLabel, HandCounts) {
  const auto s = soft_label(ratings("AAB"), kAB);
  ASSERT_EQ(s.distribution.size(), 2u);
  EXPECT_DOUBLE_EQ(s.at(Label("A")), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.at(Label("B")), 1.0 / 3.0);

  const auto single = soft_label(ratings("A"), kAB);
  ASSERT_EQ(single.distribution.size(), 1u);
  EXPECT_EQ(single.at(Label("A")), 1.0);
  EXPECT_EQ(single.at(Label("B")), 0.0);

  EXPECT_EQ(soft_label(ratings("BAA"), kAB), s);
  EXPECT_THROW((void)soft_label({}, kAB), std::invalid_argument);
}

TEST(SoftLabel, SumsToOneWithExactFractions) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::string responses;
    const std::size_t n = 1 + rng() % 11;
    for (std::size_t i = 0; i < n; ++i) responses += char('A' + rng() % 3);
    const auto s = soft_label(ratings(responses), kABC);
    double sum = 0.0;
    for (const auto& [label, p] : s.distribution) {
      const auto c = std::count(responses.begin(), responses.end(), label.str()[0]);
      EXPECT_GT(c, 0);
      EXPECT_EQ(p, static_cast<double>(c) / static_cast<double>(n));
      sum += p;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

}  // namespace
}  // namespace indeval
