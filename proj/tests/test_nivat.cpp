#include <gtest/gtest.h>

#include "strlogic/nivat.hpp"
#include "strlogic/parser.hpp"

using namespace strlogic;

namespace {

const Alphabet ab("ab");

// Right side of the decomposition by full enumeration of outputs y.
bool decomposed_by_enumeration(const Decomposition& dec, const Word& w) {
  bool found = false;
  for_each_word(dec.gamma, w.length(), w.length(), [&](const Word& y) {
    if (found) return;
    std::vector<int> p;
    for (int i = 0; i < w.length(); ++i)
      p.push_back(dec.pair_symbol(w.letters()[static_cast<std::size_t>(i)], y.letters()[static_cast<std::size_t>(i)]));
    found = dec.d.accepts(p) && language_member(dec.b, y);
  });
  return found;
}

Nfa without_finals(const Nfa& d) {
  Nfa out(d.alphabet(), d.size());
  for (int q = 0; q < d.size(); ++q) {
    out.set_initial(q, d.initial(q));
    for (int a = 0; a < d.alphabet().size(); ++a)
      for (int r : d.next(q, a)) out.add_transition(q, a, r);
  }
  return out;
}

} // namespace

TEST(Nivat, MajorityOfLetterA) {
  Formula s = parse_formula("Q[Maj] x. P_a(x)", ab);
  Decomposition dec = nivat_decompose(s, ab);
  EXPECT_TRUE(check_decomposition(dec, s, 6));
  for_each_word(ab, 1, 6, [&](const Word& w) {
    const std::string t = w.to_string();
    const auto as = std::count(t.begin(), t.end(), 'a');
    const bool expected = 2 * as > w.length();
    ASSERT_EQ(eval(s, w), expected);
    ASSERT_EQ(decomposed_by_enumeration(dec, w), expected) << t;
  });
  EXPECT_TRUE(is_aperiodic(dec.d));
}

TEST(Nivat, ConstantFalseBodyGivesEmptyLanguage) {
  Formula s = parse_formula("Q[Maj] x. false", ab);
  Decomposition dec = nivat_decompose(s, ab);
  for_each_word(ab, 1, 6, [&](const Word& w) {
    EXPECT_FALSE(eval(s, w));
    EXPECT_FALSE(decomposed_by_enumeration(dec, w));
  });
  EXPECT_TRUE(check_decomposition(dec, s, 6));
}

TEST(Nivat, DIsTheGraphOfTheTransformation) {
  Formula s = parse_formula("Q[Dyck1] x [P_a(x) & E y. (x < y & P_b(y))]", ab);
  const auto* q = s.as<node::Lindstrom>();
  TransformSpec spec{q->bodies, q->vars, q->language.alphabet()};
  Decomposition dec = nivat_decompose(s, ab);
  for_each_word(dec.pair_alphabet, 1, 5, [&](const Word& p) {
    ASSERT_EQ(dec.h(p).length(), p.length());
    ASSERT_EQ(dec.g(p).length(), p.length());
    ASSERT_EQ(dec.d.accepts(p), transform(spec, dec.h(p)) == dec.g(p)) << p.to_string();
  });
}

TEST(Nivat, CorpusChecksAndAperiodicity) {
  for (const char* text : {"Q[Maj] x. (P_a(x) | x = max)", "Q[Dyck1] x [x < max & P_a(x)]",
                           "Q[Eq01] x [P_a(x) ; E y. (y < x & P_a(y))]", "Q[Dyck2] x [x = min ; P_a(x) ; P_b(x) & x < max]",
                           "Q[Maj] x. A y. (y < x -> P_b(y))"}) {
    Formula s = parse_formula(text, ab);
    Decomposition dec = nivat_decompose(s, ab);
    EXPECT_EQ(dec.pair_alphabet.size(), ab.size() * dec.gamma.size());
    EXPECT_TRUE(check_decomposition(dec, s, 6)) << text;
    EXPECT_TRUE(is_aperiodic(dec.d)) << text;
  }
}

TEST(Nivat, CorruptedDIsCaught) {
  Formula s = parse_formula("Q[Maj] x. P_a(x)", ab);
  Decomposition dec = nivat_decompose(s, ab);
  dec.d = without_finals(dec.d);
  auto result = check_decomposition_detailed(dec, s, 6);
  EXPECT_FALSE(result.ok);
  ASSERT_TRUE(result.counterexample.has_value());
  EXPECT_TRUE(result.sentence_value);
}

TEST(Nivat, ZeroLengthCheckIsVacuous) {
  Formula s = parse_formula("Q[Maj] x. P_a(x)", ab);
  Decomposition dec = nivat_decompose(s, ab);
  dec.d = without_finals(dec.d);
  EXPECT_TRUE(check_decomposition(dec, s, 0));
}

TEST(Nivat, Errors) {
  EXPECT_THROW(nivat_decompose(parse_formula("E x. P_a(x)", ab), ab), InvalidArgument);
  EXPECT_THROW(nivat_decompose(parse_formula("Q[Maj] (x, y) . x < y", ab), ab), InvalidArgument);
  EXPECT_THROW(nivat_decompose(parse_formula("Q[Maj] x. x < y", ab), ab), InvalidArgument);
  EXPECT_THROW(nivat_decompose(parse_formula("Q[Maj] x. Q[Maj] y. y < x", ab), ab), InvalidArgument);
}
