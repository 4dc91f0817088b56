#include <gtest/gtest.h>

#include "strlogic/constructions.hpp"
#include "strlogic/parser.hpp"
#include "strlogic/semantics.hpp"

using namespace strlogic;

namespace {

const Alphabet ab("ab");

Word unary(int n) { return Word(ab, std::vector<int>(static_cast<std::size_t>(n), 0)); }

} // namespace

TEST(Multiplication, AgreesWithProductUpToFour) {
  Formula phi = multiplication_formula("a", "b", "c");
  for (int n = 1; n <= 4; ++n)
    for (int a = 1; a <= n; ++a)
      for (int b = 1; b <= n; ++b)
        for (int c = 1; c <= n; ++c)
          ASSERT_EQ(eval(phi, unary(n), {{"a", a}, {"b", b}, {"c", c}}), a * b == c) << n << " " << a << b << c;
}

TEST(Multiplication, ImageCountsProductsAndTarget) {
  Formula phi = multiplication_formula("a", "b", "c", false);
  const auto* q = phi.as<node::Lindstrom>();
  ASSERT_NE(q, nullptr);
  TransformSpec spec{q->bodies, q->vars, q->language.alphabet()};
  const int n = 4;
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      for (int c = 1; c <= n; ++c) {
        const std::string img = transform(spec, unary(n), {{"a", a}, {"b", b}, {"c", c}}).to_string();
        ASSERT_EQ(std::count(img.begin(), img.end(), '0'), a * b);
        ASSERT_EQ(std::count(img.begin(), img.end(), '1'), c);
      }
}

TEST(Multiplication, GuardCoversOnePositionWords) {
  const Assignment one{{"a", 1}, {"b", 1}, {"c", 1}};
  EXPECT_FALSE(eval(multiplication_formula("a", "b", "c", false), unary(1), one));
  EXPECT_TRUE(eval(multiplication_formula("a", "b", "c"), unary(1), one));
  EXPECT_TRUE(eval(multiplication_formula("a", "b", "c", false), unary(2), one));
}

TEST(Multiplication, FreshVariablesAvoidArguments) {
  Formula phi = multiplication_formula("x", "y", "z");
  EXPECT_EQ(free_vars(phi), (std::set<std::string>{"x", "y", "z"}));
  EXPECT_TRUE(eval(phi, unary(6), {{"x", 2}, {"y", 3}, {"z", 6}}));
}

TEST(Addition, CoreHandlesIncreasingPairs) {
  Formula core = addition_core("i", "j", "k", "x");
  for (int n = 1; n <= 9; ++n)
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) ASSERT_EQ(eval(core, unary(n), {{"i", i}, {"j", j}, {"k", k}}), i + j == k);
}

TEST(Addition, FullFormulaUpToNine) {
  Formula add = addition_formula("i", "j", "k");
  EXPECT_EQ(free_vars(add), (std::set<std::string>{"i", "j", "k"}));
  for (int n = 1; n <= 9; ++n)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) ASSERT_EQ(eval(add, unary(n), {{"i", i}, {"j", j}, {"k", k}}), i + j == k);
}

TEST(Addition, AgreesWithPlusAtom) {
  Formula add = addition_formula("i", "j", "k");
  Formula atom = parse_formula("i + j = k", ab);
  for_each_word(ab, 1, 5, [&](const Word& w) {
    const int n = w.length();
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
          const Assignment a{{"i", i}, {"j", j}, {"k", k}};
          ASSERT_EQ(eval(add, w, a), eval(atom, w, a));
        }
  });
}

TEST(Successor, NextPosition) {
  Formula s = successor("p", "q", {});
  for (int n = 1; n <= 6; ++n)
    for (int p = 1; p <= n; ++p)
      for (int q = 1; q <= n; ++q) ASSERT_EQ(eval(s, unary(n), {{"p", p}, {"q", q}}), q == p + 1);
}

TEST(PickPad, FirstFreeSymbol) {
  EXPECT_EQ(pick_pad(ab), '#');
  EXPECT_EQ(pick_pad(Alphabet("#a")), '$');
  EXPECT_THROW(pick_pad(Alphabet("#"), "#"), InvalidArgument);
}

TEST(MergeExists, WrongShapeIsRejected) {
  EXPECT_THROW(merge_exists_formula(parse_formula("Q[Maj] x. P_a(x)", ab)), InvalidArgument);
  EXPECT_THROW(merge_exists_formula(parse_formula("E x. P_a(x)", ab)), InvalidArgument);
}

TEST(MergeExists, ArityAndBodies) {
  Formula f = parse_formula("E x. Q[Dyck1] y [P_a(y) & x <= y]", ab);
  Formula g = merge_exists_formula(f);
  const auto* q = g.as<node::Lindstrom>();
  ASSERT_NE(q, nullptr);
  EXPECT_EQ(q->vars.size(), 3u);
  EXPECT_EQ(q->vars.front(), "x");
  EXPECT_EQ(q->bodies.size(), 2u);
  EXPECT_EQ(q->language.alphabet().size(), 3);
}

TEST(MergeExists, EquivalentWithOuterVariables) {
  for (const char* text : {"E x. Q[Dyck1] y [P_a(y) & x <= y & y <= u]", "E x. Q[Maj] y. (x < y | y = u)",
                           "E x. Q[Eq01] y [x = y ; y < x & P_b(y)]"}) {
    Formula f = parse_formula(text, ab);
    Formula g = merge_exists_formula(f);
    for_each_word(ab, 1, 5, [&](const Word& w) {
      for (int u = 1; u <= w.length(); ++u)
        ASSERT_EQ(eval(f, w, {{"u", u}}), eval(g, w, {{"u", u}})) << text << " " << w.to_string() << " u=" << u;
    });
  }
}
