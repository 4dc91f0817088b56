#include <gtest/gtest.h>

#include <random>

#include "strlogic/oracles.hpp"
#include "strlogic/parser.hpp"
#include "strlogic/witnesses.hpp"

using namespace strlogic;

namespace {

const Alphabet zero("0");

std::vector<std::string> binary_strings(int n) {
  std::vector<std::string> out;
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
    std::string s;
    for (int i = 0; i < n; ++i) s += ((bits >> i) & 1u) ? '1' : '0';
    out.push_back(s);
  }
  return out;
}

void expect_valid(const Factorization& f, const std::string& w, int l, int m) {
  EXPECT_EQ(f.expand(), w);
  EXPECT_LE(static_cast<int>(f.blocks.size()), l);
  for (const auto& b : f.blocks) {
    EXPECT_LE(static_cast<int>(b.unit.size()), m);
    EXPECT_GE(b.count, 1);
  }
}

} // namespace

TEST(LmBounded, Examples) {
  auto a = lm_bounded("000111", 2, 1);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->to_string(), "0^3 1^3");
  auto b = lm_bounded("010101", 1, 2);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->to_string(), "(01)^3");
  auto c = lm_bounded("00110", 3, 1);
  ASSERT_TRUE(c);
  EXPECT_EQ(c->to_string(), "0^2 1^2 0^1");
  EXPECT_FALSE(lm_bounded("00110", 2, 1));
  EXPECT_FALSE(lm_bounded("010101", 1, 1));
}

TEST(LmBounded, AgreesWithBacktrackingAndReturnsValidFactorizations) {
  for (int n = 1; n <= 10; ++n)
    for (const auto& w : binary_strings(n))
      for (int l = 1; l <= 3; ++l)
        for (int m = 1; m <= 3; ++m) {
          auto f = lm_bounded(w, l, m);
          ASSERT_EQ(f.has_value(), oracle::lm_bounded_backtrack(w, l, m)) << w << " " << l << " " << m;
          if (f) expect_valid(*f, w, l, m);
        }
}

TEST(LmBounded, MinBlocksIsLeastL) {
  for (int n = 1; n <= 9; ++n)
    for (const auto& w : binary_strings(n))
      for (int m = 1; m <= 3; ++m) {
        const int l = min_blocks(w, m);
        EXPECT_TRUE(lm_bounded(w, l, m));
        if (l > 1) EXPECT_FALSE(lm_bounded(w, l - 1, m));
      }
}

TEST(Bitwise, Examples) {
  EXPECT_EQ(bitwise_not("010"), "101");
  EXPECT_EQ(bitwise("110", "011", BitOp::And), "010");
  EXPECT_EQ(bitwise("110", "011", BitOp::Or), "111");
  EXPECT_EQ(bitwise("0110", bitwise_not("0110"), BitOp::Or), "1111");
  EXPECT_THROW(bitwise("01", "011", BitOp::And), InvalidArgument);
}

TEST(LemmaLm, Example) {
  EXPECT_TRUE(check_lemma_lm("000000", 1, 1, "010101", 1, 2));
  EXPECT_THROW(check_lemma_lm("0101", 1, 1, "0000", 1, 1), InvalidArgument);
}

TEST(LemmaLm, ComplementPreservesBoundsExhaustively) {
  for (int n = 1; n <= 12; ++n)
    for (const auto& u : binary_strings(n))
      for (int l = 1; l <= 2; ++l)
        for (int m = 1; m <= 2; ++m)
          if (lm_bounded(u, l, m)) ASSERT_TRUE(lm_bounded(bitwise_not(u), l, m)) << u;
}

TEST(LemmaLm, ExhaustiveSweepUpToTen) {
  LemmaSweep s = lemma_lm_exhaustive(10, 2);
  EXPECT_EQ(s.failures, 0) << s.first_failure;
  EXPECT_EQ(s.complement_failures, 0);
  EXPECT_GT(s.instances, 0);
}

TEST(LemmaLm, RandomSamples) {
  LemmaRandom r = lemma_lm_random(500, 60, 3, 99);
  EXPECT_EQ(r.samples, 500);
  EXPECT_EQ(r.failures, 0) << r.first_failure;
}

TEST(LemmaLm, RandomBoundedStringsAreBounded) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const int l = 1 + i % 3, m = 1 + (i / 3) % 3, n = 1 + i % 40;
    const std::string s = random_bounded_string(rng, n, l, m);
    EXPECT_EQ(static_cast<int>(s.size()), n);
    EXPECT_TRUE(lm_bounded(s, l, m)) << s;
  }
}

TEST(Tphi, Examples) {
  EXPECT_EQ(t_phi(parse_formula("E z. z + z = x", zero), "x", {}, 6), "010101");
  EXPECT_EQ(t_phi(parse_formula("x = min", zero), "x", {}, 4), "1000");
  EXPECT_EQ(t_phi(parse_formula("y < x & x <= w", zero), "x", {{"y", 2}, {"w", 4}}, 6), "001100");
  EXPECT_THROW(t_phi(parse_formula("P_0(x)", zero), "x", {}, 3), InvalidArgument);
  EXPECT_THROW(t_phi(parse_formula("BIT(x, x)", zero), "x", {}, 3), InvalidArgument);
}

TEST(Tphi, LinearEquationGivesThreeBlocks) {
  Formula f = parse_formula("x + y = w", zero);
  for_each_tphi(f, "x", {"y", "w"}, 10, [&](int, const Assignment&, const std::string& t) {
    EXPECT_TRUE(lm_bounded(t, 3, 1)) << t;
  });
}

TEST(Tphi, BoundedChecks) {
  EXPECT_TRUE(check_tphi_bounded(parse_formula("E z. z + z = x", zero), "x", {}, 20, 2, 2));
  EXPECT_FALSE(check_tphi_bounded(parse_formula("E z. z + z = x", zero), "x", {}, 20, 3, 1));
  EXPECT_TRUE(check_tphi_bounded(parse_formula("x = min", zero), "x", {}, 20, 2, 1));
}

TEST(Tphi, CorpusHasUniformBounds) {
  for (const auto& e : arithmetic_corpus()) {
    Formula f = parse_formula(e.text, zero);
    EXPECT_LE(quantifier_rank(f), 2) << e.name;
    const int n_max = e.params.size() == 2 ? 14 : 24;
    LmProfile p = minimal_lm(f, e.x, e.params, n_max);
    ASSERT_TRUE(p.minimal.has_value()) << e.name;
    EXPECT_TRUE(check_tphi_bounded(f, e.x, e.params, n_max, p.minimal->first, p.minimal->second)) << e.name;
  }
}

TEST(Tphi, MinimalProfileRule) {
  LmProfile p = minimal_lm(parse_formula("E z. z + z = x", zero), "x", {}, 20);
  ASSERT_TRUE(p.minimal);
  EXPECT_EQ(*p.minimal, std::make_pair(2, 2));
  EXPECT_EQ(p.blocks_needed[0], 20);
  LmProfile q = minimal_lm(parse_formula("x = max", zero), "x", {}, 20);
  EXPECT_EQ(*q.minimal, std::make_pair(2, 1));
}

TEST(Squares, ReportSeparatesAtSixty) {
  SquaresReport r = squares_witness_report(60);
  EXPECT_EQ(r.squares, (std::set<int>{1, 4, 9, 16, 25, 36, 49}));
  EXPECT_FALSE(r.squares_fit.has_value());
  EXPECT_EQ(r.corpus.size(), unary_cfg_corpus().size());
  for (const auto& e : r.corpus) {
    ASSERT_TRUE(e.fit.has_value()) << e.name;
    for (int n = 0; n <= 60; ++n) ASSERT_EQ(e.fit->contains(n), e.lengths.count(n) > 0) << e.name << " " << n;
  }
  EXPECT_TRUE(r.separates());
}

TEST(Squares, NeverFitAtFiftyAndAbove) {
  for (int n = 50; n <= 120; n += 7) {
    std::set<int> sq;
    for (int i = 1; i * i <= n; ++i) sq.insert(i * i);
    EXPECT_FALSE(semilinear_fit(sq, n)) << n;
  }
}

TEST(Squares, EmptyCorpusReportsSquaresOnly) {
  SquaresReport r = squares_witness_report(60, {});
  EXPECT_TRUE(r.corpus.empty());
  EXPECT_FALSE(r.squares_fit);
  EXPECT_TRUE(r.separates());
}

TEST(Ww, Examples) {
  const Alphabet ab("ab");
  EXPECT_EQ(ww_witness(Word::from_string(ab, "abab")), std::make_pair(true, false));
  EXPECT_EQ(ww_witness(Word::from_string(ab, "abba")), std::make_pair(false, true));
  EXPECT_EQ(ww_witness(Word::from_string(ab, "aba")), std::make_pair(false, true));
}

TEST(Ww, ComplementGrammarIsExact) {
  const Alphabet ab("ab");
  Grammar co = ww_complement_grammar();
  for_each_word(ab, 1, 10, [&](const Word& w) {
    const std::string s = w.to_string();
    const bool ww = s.size() % 2 == 0 && s.substr(0, s.size() / 2) == s.substr(s.size() / 2);
    ASSERT_EQ(is_ww(w), ww);
    ASSERT_NE(cyk_member(co, w), ww) << s;
  });
}
