#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "strlogic/constructions.hpp"
#include "strlogic/grammar.hpp"
#include "strlogic/languages.hpp"
#include "strlogic/oracles.hpp"
#include "strlogic/parser.hpp"
#include "strlogic/semantics.hpp"

using namespace strlogic;

namespace {

Word word(const Grammar& g, const std::string& s) { return Word::from_string(g.terminals(), s); }

bool member(const Grammar& g, const std::string& s) {
  for (char c : s)
    if (!g.terminals().contains(c)) return false;
  return cyk_member(g, word(g, s));
}

// A grammar with single-uppercase-letter nonterminals and lowercase/digit
// terminals, kept in source form for the derivation oracle.
struct RawGrammar {
  std::string terminals;
  std::multimap<char, std::string> rules; // lhs -> rhs, S is the start

  std::string text() const {
    std::string out = "terminals:";
    for (char c : terminals) out += std::string(" ") + c;
    out += "\nstart: S\n";
    for (const auto& [lhs, rhs] : rules) {
      out += std::string(1, lhs) + " ->";
      for (char c : rhs) out += std::isupper(static_cast<unsigned char>(c)) ? std::string(" ") + c : std::string(" '") + c + "'";
      out += "\n";
    }
    return out;
  }

  // Leftmost derivations over sentential forms of length <= n (ε-free rules
  // never shrink a form).
  std::set<std::string> derive(int n) const {
    std::set<std::string> seen{"S"}, words;
    std::vector<std::string> todo{"S"};
    while (!todo.empty()) {
      std::string f = todo.back();
      todo.pop_back();
      auto pos = std::find_if(f.begin(), f.end(), [](char c) { return std::isupper(static_cast<unsigned char>(c)); });
      if (pos == f.end()) {
        words.insert(f);
        continue;
      }
      const std::size_t i = static_cast<std::size_t>(pos - f.begin());
      auto [lo, hi] = rules.equal_range(f[i]);
      for (auto it = lo; it != hi; ++it) {
        std::string g = f.substr(0, i) + it->second + f.substr(i + 1);
        if (static_cast<int>(g.size()) <= n && seen.insert(g).second) todo.push_back(g);
      }
    }
    return words;
  }
};

RawGrammar random_grammar(std::mt19937_64& rng, const std::string& terminals, const std::string& nts) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const std::string symbols = terminals + nts;
  RawGrammar g;
  g.terminals = terminals;
  for (char lhs : nts) {
    const std::size_t count = 1 + pick(3);
    // one terminal-only rule keeps most nonterminals productive
    g.rules.emplace(lhs, std::string(1, terminals[pick(terminals.size())]));
    for (std::size_t r = 0; r < count; ++r) {
      std::string rhs;
      const std::size_t len = 1 + pick(3);
      for (std::size_t k = 0; k < len; ++k) rhs += symbols[pick(symbols.size())];
      g.rules.emplace(lhs, rhs);
    }
  }
  return g;
}

} // namespace

TEST(Cyk, DyckOneExamples) {
  Grammar g = dyck_grammar(1);
  EXPECT_TRUE(member(g, "()"));
  EXPECT_FALSE(member(g, "(()"));
  EXPECT_TRUE(member(g, "(())()"));
  EXPECT_FALSE(member(g, ")("));
}

TEST(Cyk, DyckTwoExamplesAndStackOracle) {
  Grammar g = dyck_grammar(2);
  EXPECT_TRUE(member(g, "([])"));
  EXPECT_FALSE(member(g, "(]"));
  for_each_word(g.terminals(), 1, 8, [&](const Word& w) {
    ASSERT_EQ(cyk_member(g, w), oracle::dyck_by_cancellation(w.to_string())) << w.to_string();
    ASSERT_EQ(cyk_member(g, w), recognizers::dyck(w.letters())) << w.to_string();
  });
}

TEST(Cyk, RejectsForeignAlphabet) {
  Grammar g = dyck_grammar(1);
  EXPECT_THROW(cyk_member(g, Word::from_string(Alphabet("ab"), "ab")), InvalidArgument);
}

TEST(Cyk, RandomGrammarsAgreeWithDerivations) {
  std::mt19937_64 rng(11);
  int nonempty = 0;
  for (int trial = 0; trial < 40; ++trial) {
    RawGrammar raw = random_grammar(rng, "ab", trial % 2 ? "SAB" : "SA");
    Grammar g = parse_grammar(raw.text());
    const auto words = raw.derive(6);
    nonempty += words.empty() ? 0 : 1;
    for_each_word(Alphabet("ab"), 1, 6, [&](const Word& w) {
      ASSERT_EQ(cyk_member(g, w), words.count(w.to_string()) > 0) << raw.text() << w.to_string();
    });
    EXPECT_EQ(oracle::cnf_language_upto(g, 6), words) << raw.text();
  }
  EXPECT_GT(nonempty, 30);
}

TEST(Grammar, NormalizesToCnf) {
  Grammar g = parse_grammar("S -> 'a' S 'b' | A\nA -> B\nB -> 'c' | ''");
  for (const auto& r : g.binary_rules()) {
    EXPECT_GE(r.left, 0);
    EXPECT_GE(r.right, 0);
  }
  EXPECT_TRUE(member(g, "c"));
  EXPECT_TRUE(member(g, "ab"));
  EXPECT_TRUE(member(g, "aacbb"));
  EXPECT_FALSE(member(g, "acbb"));
}

TEST(Grammar, TextRoundTrip) {
  for (const Grammar& g : {dyck_grammar(2), equal_zero_one_grammar(), majority_grammar()}) {
    Grammar h = parse_grammar(g.to_text());
    for_each_word(g.terminals(), 1, 6, [&](const Word& w) { ASSERT_EQ(cyk_member(g, w), cyk_member(h, w)); });
  }
}

TEST(Grammar, SyntaxErrors) {
  EXPECT_THROW(parse_grammar("S -> 'ab'"), SyntaxError);
  EXPECT_THROW(parse_grammar("S A -> 'a'"), SyntaxError);
  EXPECT_THROW(parse_grammar("S 'a'"), SyntaxError);
}

namespace {

// w in L2 iff w = w1 #+ ... wn #+ with nonempty pad-free blocks, some block in L1.
bool merge_oracle(const std::string& w, const std::function<bool(const std::string&)>& in_l1) {
  if (w.empty() || w.front() == '#' || w.back() != '#') return false;
  bool hit = false;
  std::string block;
  for (char c : w) {
    if (c == '#') {
      if (!block.empty()) hit = hit || in_l1(block);
      block.clear();
    } else {
      block += c;
    }
  }
  return hit;
}

} // namespace

TEST(ExistsMerge, Examples) {
  Grammar g1 = parse_grammar("terminals: a b\nS -> 'a'");
  Grammar l2 = exists_merge(g1, '#');
  EXPECT_EQ(l2.terminals().symbols(), "#ab");
  EXPECT_TRUE(member(l2, "a#"));
  EXPECT_TRUE(member(l2, "b#a#"));
  EXPECT_FALSE(member(l2, "b#"));
  EXPECT_THROW(exists_merge(g1, 'a'), InvalidArgument);
}

TEST(ExistsMerge, SplitterOracle) {
  const std::vector<std::pair<Grammar, std::function<bool(const std::string&)>>> cases = {
      {parse_grammar("terminals: a b\nS -> 'a'"), [](const std::string& s) { return s == "a"; }},
      {dyck_grammar(1), [](const std::string& s) { return oracle::dyck_by_cancellation(s); }},
  };
  for (const auto& [g1, in_l1] : cases) {
    Grammar l2 = exists_merge(g1, '#');
    for_each_word(l2.terminals(), 1, 6, [&](const Word& w) {
      ASSERT_EQ(cyk_member(l2, w), merge_oracle(w.to_string(), in_l1)) << w.to_string();
    });
  }
}

TEST(ExistsMerge, ComplementGrammar) {
  // L2 ∪ L1 and its complement partition (pad, A)+.
  Grammar g1 = dyck_grammar(1);
  Grammar co1 = dyck_complement_grammar(1);
  Grammar both = grammar_union(exists_merge(g1, '#'), g1);
  Grammar co = exists_merge_complement(co1, '#');
  ASSERT_EQ(both.terminals().symbols(), co.terminals().symbols());
  for_each_word(both.terminals(), 1, 6, [&](const Word& w) {
    const std::string s = w.to_string();
    auto dyck = [](const std::string& t) { return oracle::dyck_by_cancellation(t); };
    const bool expected = merge_oracle(s, dyck) ||
                          (s.find('#') == std::string::npos && oracle::dyck_by_cancellation(s));
    ASSERT_EQ(cyk_member(both, w), expected) << s;
    ASSERT_NE(cyk_member(co, w), expected) << s;
  });
}

TEST(MergeExistsFormula, ShapeAndFreeVariables) {
  const Alphabet ab("ab");
  Formula f = parse_formula("E x. Q[Maj] (y, u) . (x < y & u < v)", ab);
  Formula g = merge_exists_formula(f);
  const auto* q = g.as<node::Lindstrom>();
  ASSERT_NE(q, nullptr);
  EXPECT_EQ(q->vars.size(), 4u);
  EXPECT_EQ(free_vars(g), free_vars(f));
  EXPECT_EQ(q->language.alphabet().symbol(0), '#');
}

TEST(MergeExistsFormula, EquivalentOnShortWords) {
  const Alphabet ab("ab");
  for (const char* text : {"E x. Q[Maj] y. (y < x | P_a(y))", "E x. Q[Dyck1] y. (P_a(y) & x <= y)"}) {
    Formula f = parse_formula(text, ab);
    Formula g = merge_exists_formula(f);
    for_each_word(ab, 1, 5, [&](const Word& w) { ASSERT_EQ(eval(f, w, {}, {true}), eval(g, w, {}, {true})) << text << " " << w.to_string(); });
  }
}

TEST(MergeExistsFormula, NeedsComplementGrammar) {
  LanguageEnv env;
  env.add(grammar_language("A+", parse_grammar("terminals: a b\nS -> 'a' | 'a' S")));
  Formula f = parse_formula("E x. Q[A+] y. (x < y)", Alphabet("ab"), &env);
  EXPECT_THROW(merge_exists_formula(f), InvalidArgument);
}

namespace {

// h(x) = $ L1 # B*, h(y) = $ ~L1 #*, with L1 = {a} over (a,b) and outer = x^n y^n.
bool substitution_oracle(const std::string& w) {
  if (w.empty() || w[0] != '$') return false;
  std::vector<std::size_t> dollars;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == '$') dollars.push_back(i);
  auto inner = [](const std::string& s) {
    return !s.empty() && s.find_first_not_of("ab") == std::string::npos;
  };
  auto image_of = [&](const std::string& seg, char letter) {
    const std::string body = seg.substr(1);
    if (letter == 'x') return body.size() >= 2 && body[0] == 'a' && body[1] == '#';
    const auto first_pad = body.find('#');
    const std::string x = body.substr(0, first_pad);
    const bool pads_only = first_pad == std::string::npos || body.find_first_not_of('#', first_pad) == std::string::npos;
    return inner(x) && x != "a" && pads_only;
  };
  for (std::uint32_t mask = 0; mask < (1u << dollars.size()); ++mask) {
    std::vector<std::size_t> starts{0};
    for (std::size_t i = 0; i < dollars.size(); ++i)
      if ((mask >> i) & 1u) starts.push_back(dollars[i]);
    std::vector<std::string> segs;
    for (std::size_t i = 0; i < starts.size(); ++i)
      segs.push_back(w.substr(starts[i], (i + 1 < starts.size() ? starts[i + 1] : w.size()) - starts[i]));
    const std::size_t k = segs.size();
    if (k % 2 != 0) continue;
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) ok = image_of(segs[i], i < k / 2 ? 'x' : 'y');
    if (ok) return true;
  }
  return false;
}

} // namespace

TEST(SubstitutionLanguage, MatchesBlockOracle) {
  Grammar outer = parse_grammar("terminals: x y\nS -> 'x' 'y' | 'x' S 'y'");
  GrammarPair part{parse_grammar("terminals: a b\nS -> 'a'"),
                   parse_grammar("terminals: a b\nS -> 'b' | 'a' X | 'b' X\nX -> 'a' | 'b' | 'a' X | 'b' X")};
  Grammar l = substitution_language(outer, {part}, '#', '$');
  EXPECT_EQ(l.terminals().symbols(), "ab#$");
  for_each_word(l.terminals(), 1, 8, [&](const Word& w) {
    const std::string s = w.to_string();
    ASSERT_EQ(cyk_member(l, w), substitution_oracle(s)) << s;
    if (cyk_member(l, w)) ASSERT_EQ(s[0], '$');
  });
  EXPECT_THROW(substitution_language(outer, {}, '#', '$'), InvalidArgument);
  EXPECT_THROW(substitution_language(outer, {part}, 'a', '$'), InvalidArgument);
}

TEST(PadLanguage, Examples) {
  Grammar g = parse_grammar("terminals: a b\nS -> 'a' 'b'");
  Grammar p = pad_language(g, '#');
  EXPECT_TRUE(member(p, "a#b"));
  EXPECT_TRUE(member(p, "#a#b#"));
  EXPECT_FALSE(member(p, "ba"));
  EXPECT_FALSE(member(p, "##"));
  EXPECT_THROW(pad_language(g, 'a'), InvalidArgument);
}

TEST(PadLanguage, EraseOracle) {
  Grammar g = dyck_grammar(1);
  Grammar p = pad_language(g, '#');
  for_each_word(p.terminals(), 1, 7, [&](const Word& w) {
    std::string erased;
    for (char c : w.to_string())
      if (c != '#') erased += c;
    const bool expected = !erased.empty() && oracle::dyck_by_cancellation(erased);
    ASSERT_EQ(cyk_member(p, w), expected) << w.to_string();
  });
}

TEST(LengthSet, Examples) {
  Grammar odd = parse_grammar("terminals: 0\nS -> '0' | '0' '0' S");
  std::set<int> expected;
  for (int n = 1; n <= 20; n += 2) expected.insert(n);
  EXPECT_EQ(length_set(odd, 20), expected);
  Grammar plus = parse_grammar("terminals: 0\nS -> '0' | '0' S");
  EXPECT_EQ(length_set(plus, 10).size(), 10u);
  EXPECT_THROW(length_set(dyck_grammar(1), 10), InvalidArgument);
}

TEST(SemilinearFit, Examples) {
  std::set<int> odd;
  for (int n = 1; n <= 39; n += 2) odd.insert(n);
  auto fit = semilinear_fit(odd, 40);
  ASSERT_TRUE(fit);
  ASSERT_EQ(fit->components.size(), 1u);
  EXPECT_EQ(fit->components[0], (LinearComponent{1, {2}}));

  EXPECT_FALSE(semilinear_fit({1, 4, 9, 16, 25, 36}, 40));

  auto empty = semilinear_fit({}, 40);
  ASSERT_TRUE(empty);
  EXPECT_TRUE(empty->components.empty());
}

TEST(SemilinearFit, SmallNSquaresCaveat) {
  // The rule needs bases <= N/2 and periods <= N/4; {1,4,9} at N=9 has no such fit.
  EXPECT_FALSE(semilinear_fit({1, 4, 9}, 9));
}

TEST(SemilinearFit, FitReproducesTheSet) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + static_cast<int>(rng() % 6), t = 1 + static_cast<int>(rng() % 10);
    std::set<int> s;
    for (int n = 1; n <= 60; ++n)
      if ((n < t && rng() % 3 == 0) || (n >= t && ((n - t) % p == 0 || (n - t) % p == p / 2))) s.insert(n);
    auto fit = semilinear_fit(s, 60);
    if (!fit) continue;
    for (int n = 0; n <= 60; ++n) ASSERT_EQ(fit->contains(n), s.count(n) > 0) << fit->to_string() << " n=" << n;
  }
}

TEST(SemilinearFit, RandomUnaryGrammarsFit) {
  std::mt19937_64 rng(3);
  int tested = 0;
  for (int trial = 0; trial < 60; ++trial) {
    RawGrammar raw = random_grammar(rng, "0", trial % 2 ? "SABC" : "SAB");
    Grammar g = parse_grammar(raw.text());
    auto lengths = length_set(g, 60);
    auto fit = semilinear_fit(lengths, 60);
    EXPECT_TRUE(fit.has_value()) << raw.text();
    ++tested;
  }
  EXPECT_EQ(tested, 60);
}
