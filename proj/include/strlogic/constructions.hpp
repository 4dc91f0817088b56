#ifndef STRLOGIC_CONSTRUCTIONS_HPP
#define STRLOGIC_CONSTRUCTIONS_HPP

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "formula.hpp"
#include "grammar.hpp"
#include "languages.hpp"

// Formulas built from groupoidal quantifiers: multiplication and addition of
// positions, and the merge of an existential quantifier into a Lindström one.

namespace strlogic {

// a·b = c through Q[EqualZeroOne] over triples: ab tuples produce 0, c tuples
// produce 1. The unguarded form is false on one-position words (min = max makes
// the single tuple a 0); `guarded` adds the disjunct min = max, which is exactly
// the n = 1 case where a = b = c = 1.
inline Formula multiplication_formula(const std::string& a, const std::string& b, const std::string& c,
                                      bool guarded = true) {
  using namespace fo;
  std::set<std::string> taken{a, b, c};
  const std::string x = fresh_name("x", taken);
  taken.insert(x);
  const std::string y = fresh_name("y", taken);
  taken.insert(y);
  const std::string z = fresh_name("z", taken);
  Formula q = lindstrom(LanguageRef::named(NamedLanguage::EqualZeroOne), {x, y, z},
                        {conj({eq(v(z), Term::min()), le(v(x), v(a)), le(v(y), v(b))}),
                         conj({eq(v(z), Term::max()), eq(v(y), Term::max()), le(v(x), v(c))})});
  if (!guarded) return q;
  return disj({eq(Term::min(), Term::max()), q});
}

// For i < j: Q[Add] x [x=i ; x=j ; x=k ; x<i | (j<x & x<k)] with default 1,
// i.e. the image 0^{i-1} a 1^{j-i-1} b 0^{k-j-1} c 1^{n-k}, which lies in the
// helper language iff k - j - 1 = i - 1.
inline Formula addition_core(const std::string& i, const std::string& j, const std::string& k,
                             const std::string& x) {
  using namespace fo;
  return lindstrom(LanguageRef::named(NamedLanguage::AdditionHelper), {x},
                   {eq(v(x), v(i)), eq(v(x), v(j)), eq(v(x), v(k)),
                    disj({lt(v(x), v(i)), conj({lt(v(j), v(x)), lt(v(x), v(k))})})});
}

// succ(p, q): q = p + 1.
inline Formula successor(const std::string& p, const std::string& q, std::set<std::string> taken) {
  using namespace fo;
  taken.insert(p);
  taken.insert(q);
  const std::string r = fresh_name("r", taken);
  return conj({lt(v(p), v(q)), neg(exists(r, conj({lt(v(p), v(r)), lt(v(r), v(q))})))});
}

// i + j = k for all positions, built from the i < j core by symmetry and, for
// i = j, from (i-1) + i = k-1.
inline Formula addition_formula(const std::string& i, const std::string& j, const std::string& k) {
  using namespace fo;
  std::set<std::string> taken{i, j, k};
  const std::string x = fresh_name("x", taken);
  taken.insert(x);
  const std::string p = fresh_name("p", taken);
  taken.insert(p);
  const std::string q = fresh_name("q", taken);
  taken.insert(q);
  const std::string m = fresh_name("m", taken);
  taken.insert(m);
  Formula first_step = conj({eq(v(i), Term::min()),
                             exists(m, conj({eq(v(m), Term::min()), successor(m, k, taken)}))});
  Formula doubled = exists(p, exists(q, conj({successor(p, i, taken), successor(q, k, taken), addition_core(p, i, q, x)})));
  return disj({conj({lt(v(i), v(j)), addition_core(i, j, k, x)}),
               conj({lt(v(j), v(i)), addition_core(j, i, k, x)}),
               conj({eq(v(i), v(j)), disj({first_step, doubled})})});
}

inline char pick_pad(const Alphabet& sigma, std::string_view pool = "#$%&@!") {
  for (char c : pool)
    if (!sigma.contains(c)) return c;
  throw InvalidArgument("no free pad symbol for alphabet " + sigma.to_string());
}

// ∃x Q[L1] ȳ [ξ_1; ...; ξ_{s-1}]  ~>  Q[L'] (x, z, ȳ) [z > min ; z = min & ξ_1 ; ...]
// where L' = L2 ∪ L1 over (pad, A) and L2 asks for some pad-delimited block in
// L1. L' comes with its complement grammar, built from L1's.
inline Formula merge_exists_formula(const Formula& f, std::optional<char> pad_symbol = std::nullopt) {
  using namespace fo;
  const auto* ex = f.as<node::Exists>();
  const auto* q = ex ? ex->body.as<node::Lindstrom>() : nullptr;
  if (!q) throw InvalidArgument("merge_exists_formula expects  E x. Q[L] ... ");
  auto pair = grammar_pair(q->language);
  if (!pair)
    throw InvalidArgument("language " + q->language.name() + " needs a grammar and a complement grammar to merge");
  for (const auto& y : q->vars)
    if (y == ex->var) throw InvalidArgument("quantified variable '" + y + "' is also a tuple variable");
  const char pad = pad_symbol.value_or(pick_pad(q->language.alphabet()));
  Grammar merged = grammar_union(exists_merge(pair->language, pad), pair->language);
  Grammar co = exists_merge_complement(pair->complement, pad);
  LanguageRef lang = grammar_language("Exists(" + q->language.name() + ")", std::move(merged), std::move(co));

  std::set<std::string> taken = all_vars(f);
  const std::string z = fresh_name("z", taken);
  std::vector<std::string> vars{ex->var, z};
  vars.insert(vars.end(), q->vars.begin(), q->vars.end());
  std::vector<Formula> bodies{lt(Term::min(), v(z))};
  for (const auto& xi : q->bodies) bodies.push_back(conj({eq(v(z), Term::min()), xi}));
  return lindstrom(std::move(lang), std::move(vars), std::move(bodies));
}

} // namespace strlogic

#endif // STRLOGIC_CONSTRUCTIONS_HPP
