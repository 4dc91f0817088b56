#ifndef STRLOGIC_NIVAT_HPP
#define STRLOGIC_NIVAT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alphabet.hpp"
#include "automata.hpp"
#include "error.hpp"
#include "formula.hpp"
#include "groupoid.hpp"
#include "languages.hpp"
#include "semantics.hpp"
#include "transducer.hpp"

namespace strlogic {

// A = h(L(D) ∩ g⁻¹(B)) for a unary Lindström sentence over Δ with language B
// over Γ. Pair symbols are single characters; pairs[c] = (δ, γ) letter indices.
struct Decomposition {
  Alphabet delta;
  Alphabet gamma;
  Alphabet pair_alphabet;
  std::vector<std::pair<int, int>> pairs;
  Nfa d;
  LanguageRef b;

  int pair_symbol(int delta_letter, int gamma_letter) const { return delta_letter * gamma.size() + gamma_letter; }
  Word h(const Word& p) const { return project(p, delta, true); }
  Word g(const Word& p) const { return project(p, gamma, false); }

private:
  Word project(const Word& p, const Alphabet& target, bool first) const {
    std::vector<int> out;
    for (int c : p.letters()) {
      const auto& pr = pairs[static_cast<std::size_t>(c)];
      out.push_back(first ? pr.first : pr.second);
    }
    return Word(target, std::move(out));
  }
};

namespace detail {

inline const node::Lindstrom* unary_sentence(const Formula& sentence) {
  const auto* q = sentence.as<node::Lindstrom>();
  if (!q) throw InvalidArgument("a Nivat decomposition needs a sentence Q[B] x [...]");
  if (q->vars.size() != 1) throw InvalidArgument("a Nivat decomposition needs a unary quantifier");
  if (!free_vars(sentence).empty()) throw InvalidArgument("the quantified formula must be a sentence");
  return q;
}

} // namespace detail

// D is the FO-translation transducer of the bodies, read over pair symbols.
inline Decomposition nivat_decompose(const Formula& sentence, const Alphabet& delta, const CompileOptions& opts = {}) {
  const auto* q = detail::unary_sentence(sentence);
  const Alphabet& gamma = q->language.alphabet();
  const std::size_t count = static_cast<std::size_t>(delta.size()) * static_cast<std::size_t>(gamma.size());
  if (count > generated_element_names.size())
    throw CapExceeded("pair alphabet of " + std::to_string(count) + " symbols is too large");
  Alphabet pair_alphabet(generated_element_names.substr(0, count));
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < delta.size(); ++a)
    for (int b = 0; b < gamma.size(); ++b) pairs.emplace_back(a, b);

  Nft m = compile_fo_translation(TransformSpec{q->bodies, q->vars, gamma}, delta, opts);
  std::vector<std::string> names;
  for (int s = 0; s < m.size(); ++s) names.push_back(m.name(s));
  Nfa d(pair_alphabet, names);
  d.set_initial(m.initial());
  for (int s = 0; s < m.size(); ++s) {
    d.set_final(s, m.final(s));
    for (const auto& t : m.transitions_from(s)) d.add_transition(s, t.input * gamma.size() + t.output, t.to);
  }
  return Decomposition{delta, gamma, pair_alphabet, std::move(pairs), std::move(d), q->language};
}

struct DecompositionCheck {
  bool ok = true;
  long words = 0;
  std::optional<Word> counterexample;
  bool sentence_value = false; // at the counterexample
};

// For every w over Δ with 1 <= |w| <= max_len, compares the sentence with
// "some y over Γ has (w, y) in D and y in B", enumerating y letter by letter
// while simulating D.
inline DecompositionCheck check_decomposition_detailed(const Decomposition& dec, const Formula& sentence, int max_len,
                                                       EvalOptions opts = {}) {
  DecompositionCheck result;
  const Nfa& d = dec.d;
  const int gs = dec.gamma.size();
  for_each_word(dec.delta, 1, max_len, [&](const Word& w) {
    if (!result.ok) return;
    ++result.words;
    const bool lhs = eval(sentence, w, {}, opts);
    const auto letters = w.letters();
    std::vector<int> y;
    bool rhs = false;
    auto dfs = [&](auto&& self, const std::vector<bool>& states) -> void {
      if (rhs) return;
      const std::size_t i = y.size();
      if (i == letters.size()) {
        bool accept = false;
        for (int s = 0; s < d.size(); ++s) accept = accept || (states[static_cast<std::size_t>(s)] && d.final(s));
        if (accept && language_member(dec.b, Word(dec.gamma, y), opts.check_complements)) rhs = true;
        return;
      }
      for (int b = 0; b < gs; ++b) {
        const int sym = dec.pair_symbol(letters[i], b);
        std::vector<bool> next(static_cast<std::size_t>(d.size()), false);
        bool any = false;
        for (int s = 0; s < d.size(); ++s)
          if (states[static_cast<std::size_t>(s)])
            for (int r : d.next(s, sym)) any = next[static_cast<std::size_t>(r)] = true;
        if (!any) continue;
        y.push_back(b);
        self(self, next);
        y.pop_back();
      }
    };
    std::vector<bool> start(static_cast<std::size_t>(d.size()), false);
    for (int s = 0; s < d.size(); ++s) start[static_cast<std::size_t>(s)] = d.initial(s);
    dfs(dfs, start);
    if (lhs != rhs) {
      result.ok = false;
      result.counterexample = w;
      result.sentence_value = lhs;
    }
  });
  return result;
}

inline bool check_decomposition(const Decomposition& dec, const Formula& sentence, int max_len) {
  return check_decomposition_detailed(dec, sentence, max_len).ok;
}

} // namespace strlogic

#endif // STRLOGIC_NIVAT_HPP
