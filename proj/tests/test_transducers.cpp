#include <gtest/gtest.h>

#include <random>

#include "strlogic/parser.hpp"
#include "strlogic/semantics.hpp"
#include "strlogic/transducer.hpp"

using namespace strlogic;

namespace {

const Alphabet ab("ab");
const Alphabet bits("01");

const char* copy_text = "input: a b\noutput: a b\nstates: q\ninitial: q\nfinal: q\ntrans: q a/a q\ntrans: q b/b q\n";
const char* guess_text =
    "input: a b\noutput: 0 1\nstates: q\ninitial: q\nfinal: q\n"
    "trans: q a/0 q\ntrans: q a/1 q\ntrans: q b/0 q\ntrans: q b/1 q\n";

Nft random_nft(std::mt19937_64& rng, int states) {
  std::vector<std::string> names;
  for (int q = 0; q < states; ++q) names.push_back("s" + std::to_string(q));
  Nft m(ab, bits, names, 0);
  for (int q = 0; q < states; ++q) {
    m.set_final(q, rng() % 2 == 0);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int r = 0; r < states; ++r)
          if (rng() % 4 == 0) m.add_transition(q, a, b, r);
  }
  return m;
}

// Every accepting run, followed one letter at a time.
std::set<std::string> outputs_by_runs(const Nft& m, const Word& w) {
  std::set<std::string> out;
  std::function<void(int, std::size_t, std::string&)> go = [&](int q, std::size_t i, std::string& acc) {
    if (i == w.letters().size()) {
      if (m.final(q)) out.insert(acc);
      return;
    }
    for (const auto& t : m.transitions_from(q))
      if (t.input == w.letters()[i]) {
        acc.push_back(m.output().symbol(t.output));
        go(t.to, i + 1, acc);
        acc.pop_back();
      }
  };
  std::string acc;
  go(m.initial(), 0, acc);
  return out;
}

std::set<std::string> strings(const std::set<Word>& ws) {
  std::set<std::string> out;
  for (const auto& w : ws) out.insert(w.to_string());
  return out;
}

TransformSpec unary(const std::string& body, const Alphabet& gamma = bits) {
  return TransformSpec{parse_formula_list(body, ab), {"x"}, gamma};
}

} // namespace

TEST(Nft, CopyAndGuessExamples) {
  Nft copy = parse_nft(copy_text);
  EXPECT_EQ(strings(run_outputs(copy, Word::from_string(ab, "ab"))), std::set<std::string>{"ab"});
  EXPECT_TRUE(is_single_valued(copy));
  EXPECT_TRUE(is_aperiodic_nft(copy));
  Nft guess = parse_nft(guess_text);
  for (int n = 1; n <= 6; ++n)
    EXPECT_EQ(run_outputs(guess, Word(ab, std::vector<int>(static_cast<std::size_t>(n), 0))).size(), std::size_t{1} << n);
  EXPECT_FALSE(is_single_valued(guess));
}

TEST(Nft, ParityProjectionIsNotAperiodic) {
  Nft m = parse_nft("input: a\noutput: a\nstates: e o\ninitial: e\nfinal: e\ntrans: e a/a o\ntrans: o a/a e\n");
  EXPECT_FALSE(is_aperiodic_nft(m));
}

TEST(Nft, ParseErrorsAndRoundTrip) {
  EXPECT_THROW(parse_nft("states: q\ninitial: q\ntrans: q ab q"), SyntaxError);
  EXPECT_THROW(parse_nft("states: p q\ninitial: p q\ntrans: p a/b q"), SyntaxError);
  EXPECT_THROW(parse_nft("states: q\ninitial: r\ntrans: q a/b q"), SyntaxError);
  std::mt19937_64 rng(20);
  for (int i = 0; i < 20; ++i) {
    Nft m = random_nft(rng, 1 + i % 4);
    Nft back = parse_nft(m.to_text());
    for_each_word(ab, 1, 5, [&](const Word& w) { ASSERT_EQ(run_outputs(m, w), run_outputs(back, w)); });
  }
}

TEST(Nft, RunOutputsMatchRunEnumeration) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 60; ++i) {
    Nft m = random_nft(rng, 1 + i % 4);
    for_each_word(ab, 1, 6, [&](const Word& w) { ASSERT_EQ(strings(run_outputs(m, w)), outputs_by_runs(m, w)) << m.to_text(); });
  }
}

TEST(Nft, TrimAndBisimulationPreserveTheRelation) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 60; ++i) {
    Nft m = random_nft(rng, 2 + i % 4);
    Nft t = trim(m), r = reduce_bisimulation(m);
    EXPECT_LE(t.size(), m.size());
    EXPECT_LE(r.size(), m.size());
    for_each_word(ab, 1, 6, [&](const Word& w) {
      ASSERT_EQ(run_outputs(t, w), run_outputs(m, w));
      ASSERT_EQ(run_outputs(r, w), run_outputs(m, w));
    });
  }
}

TEST(Nft, DecisionsAgreeWithBoundedSearch) {
  // With <= 2 states every counterexample to totality or functionality has
  // length <= 8 (the self-product has 8 configurations).
  std::mt19937_64 rng(23);
  int single = 0;
  for (int i = 0; i < 400; ++i) {
    Nft m = random_nft(rng, 1 + i % 2);
    bool total = true, functional = true;
    for_each_word(ab, 1, 8, [&](const Word& w) {
      const auto n = run_outputs(m, w).size();
      total = total && n >= 1;
      functional = functional && n <= 1;
    });
    ASSERT_EQ(is_total(m), total) << m.to_text();
    ASSERT_EQ(is_functional(m), functional) << m.to_text();
    ASSERT_EQ(is_single_valued(m), total && functional);
    single += total && functional ? 1 : 0;
  }
  EXPECT_GT(single, 0);
}

TEST(Compiler, LastLetterEverywhere) {
  // every position gets the first output letter exactly when the word ends in a
  Nft m = compile_fo_translation(parse_formula("P_a(max)", ab), "x", ab, ab);
  EXPECT_EQ(strings(run_outputs(m, Word::from_string(ab, "ba"))), std::set<std::string>{"aa"});
  for_each_word(ab, 1, 8, [&](const Word& w) {
    const std::string s = w.to_string();
    ASSERT_EQ(strings(run_outputs(m, w)), std::set<std::string>{std::string(s.size(), s.back())});
  });
}

TEST(Compiler, PointwiseAtomCopies) {
  Nft m = compile_fo_translation(parse_formula("P_a(x)", ab), "x", ab, ab);
  for_each_word(ab, 1, 8, [&](const Word& w) {
    ASSERT_EQ(strings(run_outputs(m, w)), std::set<std::string>{w.to_string()});
  });
}

TEST(Compiler, StrictBToTheLeft) {
  TransformSpec spec = unary("E y. (y < x & P_b(y))");
  Nft m = compile_fo_translation(spec, ab);
  for_each_word(ab, 1, 7, [&](const Word& w) {
    std::string expected;
    bool seen = false;
    for (char c : w.to_string()) {
      expected += seen ? '0' : '1';
      seen = seen || c == 'b';
    }
    ASSERT_EQ(transform(spec, w).to_string(), expected);
    ASSERT_EQ(strings(run_outputs(m, w)), std::set<std::string>{expected});
  });
}

TEST(Compiler, CorpusIsSingleValuedAperiodicAndCorrect) {
  const std::vector<std::string> bodies = {
      "x = min", "x = max", "P_b(x) & x < max", "E y. (x < y & P_a(y))", "A y. (y < x -> P_a(y))",
      "E y. (y < x & P_a(y)) & E y. (x < y & P_b(y))", "P_a(min) | P_b(x)", "~(x = min) & ~(x = max)",
      "E y. E z. (y < x & x < z & P_a(y) & P_a(z))", "A y. (x < y -> P_b(y))"};
  for (const auto& body : bodies) {
    TransformSpec spec = unary(body);
    CompiledTranslation c = compile_fo_translation_detailed(spec, ab);
    EXPECT_TRUE(is_single_valued(c.machine)) << body;
    EXPECT_TRUE(is_aperiodic_nft(c.machine)) << body;
    for_each_word(ab, 1, 7, [&](const Word& w) {
      ASSERT_EQ(run_outputs(c.machine, w), std::set<Word>{transform(spec, w)}) << body << " " << w.to_string();
    });
  }
}

TEST(Compiler, ThreeLetterTargetUsesCascade) {
  TransformSpec spec{parse_formula_list("x = min ; P_a(x)", ab), {"x"}, Alphabet("#ab")};
  Nft m = compile_fo_translation(spec, ab);
  EXPECT_TRUE(is_single_valued(m));
  for_each_word(ab, 1, 7, [&](const Word& w) { ASSERT_EQ(run_outputs(m, w), std::set<Word>{transform(spec, w)}); });
}

TEST(Compiler, SignatureChoice) {
  auto order = compile_fo_translation_detailed(unary("E y. (y < x & P_b(y))"), ab);
  EXPECT_EQ(order.signature, Signature::OrderOnly);
  EXPECT_EQ(order.rank, 1);
  auto ends = compile_fo_translation_detailed(unary("x = max"), ab);
  EXPECT_EQ(ends.signature, Signature::Endpoints);
  CompileOptions opts;
  opts.signature = Signature::OrderOnly;
  EXPECT_THROW(compile_fo_translation_detailed(unary("x = max"), ab, opts), InvalidArgument);
}

TEST(Compiler, RejectsNonFoBodies) {
  EXPECT_THROW(compile_fo_translation(unary("Q[Maj] y. (y < x)"), ab), InvalidArgument);
  EXPECT_THROW(compile_fo_translation(unary("BIT(x, x)"), ab), InvalidArgument);
  EXPECT_THROW(compile_fo_translation(unary("x < z"), ab), InvalidArgument);
  EXPECT_THROW(compile_fo_translation(TransformSpec{{parse_formula("x < y", ab)}, {"x", "y"}, bits}, ab), InvalidArgument);
  EXPECT_THROW(compile_fo_translation(parse_formula("P_a(x)", ab), "x", ab, Alphabet("abc")), InvalidArgument);
}

TEST(Compiler, RankCap) {
  CompileOptions opts;
  opts.limits.max_rank = 1;
  EXPECT_THROW(compile_fo_translation(unary("E y. E z. (y < x & x < z & P_a(y) & P_a(z))"), ab, opts), CapExceeded);
}
