#include <gtest/gtest.h>

#include "strlogic/oracles.hpp"

using namespace strlogic;

namespace {

const Alphabet ab("ab");

Word w(const std::string& s) { return Word::from_string(ab, s); }

} // namespace

TEST(EfOracle, HandCheckedPairs) {
  EXPECT_TRUE(oracle::ef_equivalent(w("ab"), w("ab"), 3));
  // rank 1 sees letter sets only (order-only)
  EXPECT_TRUE(oracle::ef_equivalent(w("ab"), w("ba"), 1, Signature::OrderOnly));
  EXPECT_FALSE(oracle::ef_equivalent(w("ab"), w("ba"), 2, Signature::OrderOnly));
  // constants see the first letter immediately
  EXPECT_FALSE(oracle::ef_equivalent(w("ab"), w("ba"), 0));
  // linear orders of length >= 3 are 2-equivalent without constants
  EXPECT_TRUE(oracle::ef_equivalent(w("aaa"), w("aaaa"), 1));
  EXPECT_TRUE(oracle::ef_equivalent(w("aaa"), w("aaaa"), 2, Signature::OrderOnly));
  EXPECT_FALSE(oracle::ef_equivalent(w("aa"), w("aaa"), 2, Signature::OrderOnly));
  EXPECT_THROW(oracle::ef_equivalent(Word(ab, {}), w("a"), 1), InvalidArgument);
}

TEST(EfOracle, IsAnEquivalenceRelation) {
  std::vector<Word> ws;
  for_each_word(ab, 1, 4, [&](const Word& x) { ws.push_back(x); });
  for (const auto& x : ws)
    for (const auto& y : ws) {
      ASSERT_EQ(oracle::ef_equivalent(x, y, 2), oracle::ef_equivalent(y, x, 2));
      if (x == y) ASSERT_TRUE(oracle::ef_equivalent(x, y, 2));
    }
}

TEST(BracketingOracle, TreesHaveTheRightLeafCount) {
  std::function<int(const oracle::Tree&)> leaves = [&](const oracle::Tree& t) {
    return t.left ? leaves(*t.left) + leaves(*t.right) : 1;
  };
  for (int n = 1; n <= 6; ++n)
    for (const auto& t : oracle::bracketings(n)) EXPECT_EQ(leaves(*t), n);
}

TEST(BracketingOracle, NonAssociativeExample) {
  // x.y = y - x mod 3 is not associative, so bracketings give several results
  std::vector<int> table;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) table.push_back(((y - x) % 3 + 3) % 3);
  Groupoid g(Alphabet("012"), table);
  const std::vector<int> word{1, 1, 1};
  // (1.1).1 = 0.1 = 1 and 1.(1.1) = 1.0 = 2
  EXPECT_EQ(oracle::bracketing_products(g, word), (std::set<int>{1, 2}));
}

TEST(DyckOracle, Examples) {
  EXPECT_TRUE(oracle::dyck_by_cancellation("([]{})"));
  EXPECT_FALSE(oracle::dyck_by_cancellation("([)]"));
  EXPECT_FALSE(oracle::dyck_by_cancellation(""));
  EXPECT_FALSE(oracle::dyck_by_cancellation("(("));
}

TEST(CnfOracle, SmallLanguages) {
  Grammar g = parse_grammar("terminals: a b\nS -> 'a' S 'b' | 'a' 'b'");
  EXPECT_EQ(oracle::cnf_language_upto(g, 6), (std::set<std::string>{"ab", "aabb", "aaabbb"}));
  Grammar empty = parse_grammar("terminals: a\nS -> S S");
  EXPECT_TRUE(oracle::cnf_language_upto(empty, 5).empty());
}

TEST(LmOracle, Examples) {
  EXPECT_TRUE(oracle::lm_bounded_backtrack("000111", 2, 1));
  EXPECT_TRUE(oracle::lm_bounded_backtrack("010101", 1, 2));
  EXPECT_FALSE(oracle::lm_bounded_backtrack("0110", 1, 3));
  EXPECT_TRUE(oracle::lm_bounded_backtrack("", 1, 1));
}

TEST(DfaEnumeration, Counts) {
  long count = 0;
  oracle::for_each_dfa(ab, 2, [&](const Dfa&) { ++count; });
  // 2^4 tables, 2 initial states, 4 final sets
  EXPECT_EQ(count, 16 * 2 * 4);
  count = 0;
  oracle::for_each_dfa(Alphabet("a"), 3, [&](const Dfa&) { ++count; });
  EXPECT_EQ(count, 27 * 3 * 8);
}
