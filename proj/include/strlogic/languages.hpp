#ifndef STRLOGIC_LANGUAGES_HPP
#define STRLOGIC_LANGUAGES_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"
#include "formula.hpp"
#include "grammar.hpp"
#include "groupoid.hpp"

namespace strlogic {

// ---------------------------------------------------------------------------
// Built-in recognizers. Letters are indices into the language's alphabet.
// ---------------------------------------------------------------------------

namespace recognizers {

// (1,0): strictly more 1s than 0s.
inline bool majority(std::span<const int> w) {
  int balance = 0;
  for (int l : w) balance += l == 0 ? 1 : -1;
  return balance > 0;
}

// "()[]{}<>"[0, 2t): open brackets have even index.
inline bool dyck(std::span<const int> w) {
  if (w.empty()) return false;
  std::vector<int> stack;
  for (int l : w) {
    if (l % 2 == 0) {
      stack.push_back(l);
    } else {
      if (stack.empty() || stack.back() != l - 1) return false;
      stack.pop_back();
    }
  }
  return stack.empty();
}

// (0,1,#): as many 0s as 1s.
inline bool equal_zero_one(std::span<const int> w) {
  int balance = 0;
  for (int l : w) balance += l == 0 ? 1 : l == 1 ? -1 : 0;
  return balance == 0;
}

// (a,b,c,0,1): 0^p a 1* b 0^p c 1*.
inline bool addition_helper(std::span<const int> w) {
  enum { A, B, C, Zero, One };
  std::size_t i = 0;
  auto run = [&](int letter) {
    std::size_t start = i;
    while (i < w.size() && w[i] == letter) ++i;
    return i - start;
  };
  auto take = [&](int letter) {
    if (i < w.size() && w[i] == letter) { ++i; return true; }
    return false;
  };
  const std::size_t lead = run(Zero);
  if (!take(A)) return false;
  run(One);
  if (!take(B)) return false;
  if (run(Zero) != lead) return false;
  if (!take(C)) return false;
  run(One);
  return i == w.size();
}

} // namespace recognizers

inline bool named_member(const NamedLanguageRef& lang, std::span<const int> w) {
  switch (lang.kind) {
  case NamedLanguage::Majority: return recognizers::majority(w);
  case NamedLanguage::Dyck: return recognizers::dyck(w);
  case NamedLanguage::EqualZeroOne: return recognizers::equal_zero_one(w);
  case NamedLanguage::AdditionHelper: return recognizers::addition_helper(w);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Bundled grammars for the named languages
// ---------------------------------------------------------------------------

namespace detail {

inline std::string dyck_rules(int t, const std::string& e) {
  const std::string brackets = "()[]{}<>";
  std::string out = e + " -> ''";
  for (int i = 0; i < t; ++i)
    out += std::string(" | '") + brackets[static_cast<std::size_t>(2 * i)] + "' " + e + " '" +
           brackets[static_cast<std::size_t>(2 * i + 1)] + "' " + e;
  return out + "\n";
}

} // namespace detail

inline Grammar majority_grammar() {
  return parse_grammar(R"(terminals: 1 0
start: S
S -> E '1' E | S S
E -> '' | '0' E '1' E | '1' E '0' E
)");
}

// At least as many 0s as 1s (nonempty).
inline Grammar majority_complement_grammar() {
  return parse_grammar(R"(terminals: 1 0
start: C
C -> E | Z
Z -> E '0' E | Z Z
E -> '' | '0' E '1' E | '1' E '0' E
)");
}

// Nonempty words over t bracket pairs that are not well bracketed: either some
// closing bracket has no matching opener, or openers remain at the end.
inline Grammar dyck_complement_grammar(int t) {
  if (t < 1 || t > 4) throw InvalidArgument("Dyck(t) supports 1 <= t <= 4");
  const std::string brackets = "()[]{}<>";
  auto open = [&](int i) { return std::string("'") + brackets[static_cast<std::size_t>(2 * i)] + "'"; };
  auto close = [&](int i) { return std::string("'") + brackets[static_cast<std::size_t>(2 * i + 1)] + "'"; };
  std::string text = "terminals:";
  for (int i = 0; i < 2 * t; ++i) text += std::string(" ") + brackets[static_cast<std::size_t>(i)];
  text += "\nstart: C\nC -> Bad | Open\n";
  text += detail::dyck_rules(t, "E");
  text += "V -> ''";
  for (int i = 0; i < t; ++i) text += " | " + open(i) + " V | " + open(i) + " E " + close(i) + " V";
  text += "\nAny -> ''";
  for (int i = 0; i < 2 * t; ++i) text += std::string(" | '") + brackets[static_cast<std::size_t>(i)] + "' Any";
  text += "\nBad -> E " + close(0) + " Any";
  for (int i = 1; i < t; ++i) text += " | E " + close(i) + " Any";
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j)
      if (i != j) text += " | V " + open(i) + " E " + close(j) + " Any";
  text += "\nOpen -> V " + open(0) + " V";
  for (int i = 1; i < t; ++i) text += " | V " + open(i) + " V";
  text += "\n";
  return parse_grammar(text);
}

inline Grammar equal_zero_one_grammar() {
  return parse_grammar(R"(terminals: 0 1 '#'
start: E
E -> '' | '#' E | '0' E '1' E | '1' E '0' E
)");
}

inline Grammar equal_zero_one_complement_grammar() {
  return parse_grammar(R"(terminals: 0 1 '#'
start: C
C -> Z0 | Z1
Z0 -> E '0' E | Z0 Z0
Z1 -> E '1' E | Z1 Z1
E -> '' | '#' E | '0' E '1' E | '1' E '0' E
)");
}

inline Grammar addition_helper_grammar() {
  return parse_grammar(R"(terminals: a b c 0 1
start: S
S -> X 'c' T
X -> '0' X '0' | 'a' T 'b'
T -> '' | '1' T
)");
}

// Grammar (with complement when bundled) for a named language.
inline GrammarPair named_grammar_pair(const NamedLanguageRef& lang) {
  switch (lang.kind) {
  case NamedLanguage::Majority: return {majority_grammar(), majority_complement_grammar()};
  case NamedLanguage::Dyck: return {dyck_grammar(lang.dyck_types), dyck_complement_grammar(lang.dyck_types)};
  case NamedLanguage::EqualZeroOne: return {equal_zero_one_grammar(), equal_zero_one_complement_grammar()};
  case NamedLanguage::AdditionHelper:
    throw InvalidArgument("no complement grammar is bundled for the addition helper language");
  }
  throw InvalidArgument("unknown named language");
}

// ---------------------------------------------------------------------------
// LanguageRef construction and membership
// ---------------------------------------------------------------------------

inline LanguageRef grammar_language(std::string name, Grammar g, std::optional<Grammar> complement = std::nullopt) {
  if (complement && !(complement->terminals() == g.terminals()))
    throw InvalidArgument("complement grammar must share the terminal alphabet");
  Alphabet sigma = g.terminals();
  GrammarLanguage target{std::make_shared<const Grammar>(std::move(g)),
                         complement ? std::make_shared<const Grammar>(std::move(*complement)) : nullptr};
  return LanguageRef(std::move(name), std::move(sigma), std::move(target));
}

inline LanguageRef groupoid_language(std::string name, WordProblem wp) {
  Alphabet sigma = wp.alphabet();
  return LanguageRef(std::move(name), std::move(sigma), GroupoidLanguage{std::make_shared<const WordProblem>(std::move(wp))});
}

// The grammar of L and of its complement, when both are available.
inline std::optional<GrammarPair> grammar_pair(const LanguageRef& lang) {
  if (auto* g = std::get_if<GrammarLanguage>(&lang.target())) {
    if (!g->complement) return std::nullopt;
    return GrammarPair{*g->grammar, *g->complement};
  }
  if (auto* n = std::get_if<NamedLanguageRef>(&lang.target())) {
    if (n->kind == NamedLanguage::AdditionHelper) return std::nullopt;
    return named_grammar_pair(*n);
  }
  return std::nullopt;
}

inline bool language_member(const LanguageRef& lang, std::span<const int> w, bool check_complement = false) {
  if (w.empty()) throw InvalidArgument("languages are ε-free; membership needs a nonempty word");
  if (auto* g = std::get_if<GrammarLanguage>(&lang.target())) {
    bool in = cyk_member(*g->grammar, w);
    if (check_complement && g->complement && cyk_member(*g->complement, w) == in)
      throw Error("complement grammar of " + lang.name() + " disagrees on a word of length " +
                  std::to_string(w.size()));
    return in;
  }
  if (auto* p = std::get_if<GroupoidLanguage>(&lang.target())) return wp_member(*p->problem, w);
  return named_member(std::get<NamedLanguageRef>(lang.target()), w);
}

inline bool language_member(const LanguageRef& lang, const Word& w, bool check_complement = false) {
  if (!(w.alphabet() == lang.alphabet()))
    throw InvalidArgument("word alphabet " + w.alphabet().to_string() + " does not match " + lang.name() + " over " +
                          lang.alphabet().to_string());
  return language_member(lang, w.letters(), check_complement);
}

} // namespace strlogic

#endif // STRLOGIC_LANGUAGES_HPP
