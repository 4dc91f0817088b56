#ifndef STRLOGIC_AUTOMATA_HPP
#define STRLOGIC_AUTOMATA_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"

namespace strlogic {

// ε-free NFA. States are 0..size()-1 with printable names.
class Nfa {
public:
  Nfa(Alphabet alphabet, std::vector<std::string> names)
      : alphabet_(std::move(alphabet)), names_(std::move(names)),
        delta_(names_.size() * static_cast<std::size_t>(alphabet_.size())), initial_(names_.size(), false),
        final_(names_.size(), false) {}

  Nfa(Alphabet alphabet, int states) : Nfa(std::move(alphabet), default_names(states)) {}

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int size() const noexcept { return static_cast<int>(names_.size()); }
  const std::string& name(int q) const { return names_.at(static_cast<std::size_t>(q)); }

  void add_transition(int from, int symbol, int to) {
    check(from);
    check(to);
    if (symbol < 0 || symbol >= alphabet_.size()) throw InvalidArgument("transition symbol out of range");
    auto& out = delta_[slot(from, symbol)];
    if (std::find(out.begin(), out.end(), to) == out.end()) out.push_back(to);
  }
  void set_initial(int q, bool v = true) { check(q); initial_[static_cast<std::size_t>(q)] = v; }
  void set_final(int q, bool v = true) { check(q); final_[static_cast<std::size_t>(q)] = v; }

  const std::vector<int>& next(int q, int symbol) const { return delta_[slot(q, symbol)]; }
  bool initial(int q) const { return initial_[static_cast<std::size_t>(q)]; }
  bool final(int q) const { return final_[static_cast<std::size_t>(q)]; }

  bool accepts(std::span<const int> w) const {
    std::vector<bool> cur(initial_);
    for (int a : w) {
      std::vector<bool> nxt(names_.size(), false);
      for (int q = 0; q < size(); ++q)
        if (cur[static_cast<std::size_t>(q)])
          for (int r : next(q, a)) nxt[static_cast<std::size_t>(r)] = true;
      cur = std::move(nxt);
    }
    for (int q = 0; q < size(); ++q)
      if (cur[static_cast<std::size_t>(q)] && final(q)) return true;
    return false;
  }
  bool accepts(const Word& w) const { return accepts(w.letters()); }

  std::string to_text() const {
    std::ostringstream out;
    out << "alphabet:";
    for (char c : alphabet_.symbols()) out << ' ' << c;
    out << "\nstates:";
    for (const auto& n : names_) out << ' ' << n;
    out << "\ninitial:";
    for (int q = 0; q < size(); ++q)
      if (initial(q)) out << ' ' << name(q);
    out << "\nfinal:";
    for (int q = 0; q < size(); ++q)
      if (final(q)) out << ' ' << name(q);
    out << '\n';
    for (int q = 0; q < size(); ++q)
      for (int a = 0; a < alphabet_.size(); ++a)
        for (int r : next(q, a)) out << "trans: " << name(q) << ' ' << alphabet_.symbol(a) << ' ' << name(r) << '\n';
    return out.str();
  }

private:
  static std::vector<std::string> default_names(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("q" + std::to_string(i));
    return out;
  }
  void check(int q) const {
    if (q < 0 || q >= size()) throw InvalidArgument("state out of range");
  }
  std::size_t slot(int q, int a) const {
    return static_cast<std::size_t>(q) * static_cast<std::size_t>(alphabet_.size()) + static_cast<std::size_t>(a);
  }

  Alphabet alphabet_;
  std::vector<std::string> names_;
  std::vector<std::vector<int>> delta_;
  std::vector<bool> initial_;
  std::vector<bool> final_;
};

// Complete DFA with a single initial state.
class Dfa {
public:
  Dfa(Alphabet alphabet, std::vector<int> delta, int initial, std::vector<bool> final)
      : alphabet_(std::move(alphabet)), delta_(std::move(delta)), initial_(initial), final_(std::move(final)) {
    const auto n = final_.size();
    if (n == 0) throw InvalidArgument("a DFA needs at least one state");
    if (delta_.size() != n * static_cast<std::size_t>(alphabet_.size()))
      throw InvalidArgument("DFA transition table must be total");
    for (int q : delta_)
      if (q < 0 || q >= static_cast<int>(n)) throw InvalidArgument("DFA transition target out of range");
    if (initial_ < 0 || initial_ >= static_cast<int>(n)) throw InvalidArgument("DFA initial state out of range");
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int size() const noexcept { return static_cast<int>(final_.size()); }
  int initial() const noexcept { return initial_; }
  bool final(int q) const { return final_[static_cast<std::size_t>(q)]; }
  int next(int q, int a) const {
    return delta_[static_cast<std::size_t>(q) * static_cast<std::size_t>(alphabet_.size()) + static_cast<std::size_t>(a)];
  }
  const std::vector<int>& table() const noexcept { return delta_; }

  int run(int q, std::span<const int> w) const {
    for (int a : w) q = next(q, a);
    return q;
  }
  bool accepts(std::span<const int> w) const { return final(run(initial_, w)); }
  bool accepts(const Word& w) const { return accepts(w.letters()); }

  Nfa to_nfa() const {
    Nfa out(alphabet_, size());
    for (int q = 0; q < size(); ++q) {
      out.set_final(q, final(q));
      for (int a = 0; a < alphabet_.size(); ++a) out.add_transition(q, a, next(q, a));
    }
    out.set_initial(initial_);
    return out;
  }

private:
  Alphabet alphabet_;
  std::vector<int> delta_;
  int initial_;
  std::vector<bool> final_;
};

// Text form (one item per line, '#' starts a comment):
//   alphabet: a b      (optional; otherwise symbols in order of first use)
//   states: p q
//   initial: p
//   final: q
//   trans: p a q
inline Nfa parse_nfa(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> states, initial, final;
  std::vector<std::tuple<std::string, char, std::string>> trans;
  std::string symbols;
  bool explicit_alphabet = false;
  std::size_t offset = 0;
  auto words = [](std::string_view s) {
    std::vector<std::string> out;
    std::istringstream t{std::string(s)};
    std::string tok;
    while (t >> tok) out.push_back(tok);
    return out;
  };
  while (std::getline(in, line)) {
    const std::size_t at = offset;
    offset += line.size() + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto toks = words(line);
    if (toks.empty()) continue;
    const std::string key = toks[0];
    toks.erase(toks.begin());
    if (key == "alphabet:") {
      explicit_alphabet = true;
      for (const auto& s : toks) {
        if (s.size() != 1) throw SyntaxError("alphabet symbols are single characters", at);
        symbols += s;
      }
    } else if (key == "states:") {
      states.insert(states.end(), toks.begin(), toks.end());
    } else if (key == "initial:") {
      initial.insert(initial.end(), toks.begin(), toks.end());
    } else if (key == "final:") {
      final.insert(final.end(), toks.begin(), toks.end());
    } else if (key == "trans:") {
      if (toks.size() != 3 || toks[1].size() != 1) throw SyntaxError("expected 'trans: q a q2'", at);
      trans.emplace_back(toks[0], toks[1][0], toks[2]);
      if (!explicit_alphabet && symbols.find(toks[1][0]) == std::string::npos) symbols += toks[1][0];
    } else {
      throw SyntaxError("unknown automaton line '" + key + "'", at);
    }
  }
  if (states.empty()) throw SyntaxError("missing 'states:' line", 0);
  if (symbols.empty()) throw SyntaxError("automaton has no alphabet", 0);
  std::map<std::string, int> index;
  for (const auto& s : states)
    if (!index.emplace(s, static_cast<int>(index.size())).second) throw SyntaxError("duplicate state '" + s + "'", 0);
  auto state = [&](const std::string& s) {
    auto it = index.find(s);
    if (it == index.end()) throw SyntaxError("unknown state '" + s + "'", 0);
    return it->second;
  };
  Nfa out(Alphabet(symbols), states);
  for (const auto& s : initial) out.set_initial(state(s));
  for (const auto& s : final) out.set_final(state(s));
  for (const auto& [p, a, q] : trans) {
    auto sym = out.alphabet().index_of(a);
    if (!sym) throw SyntaxError(std::string("symbol '") + a + "' not in alphabet", 0);
    out.add_transition(state(p), *sym, state(q));
  }
  return out;
}

// Reachable part of the subset automaton. The empty subset appears as a sink
// when it is reachable.
inline Dfa subset_construction(const Nfa& a) {
  const int s = a.alphabet().size();
  using Subset = std::vector<int>;
  std::map<Subset, int> index;
  std::vector<Subset> subsets;
  auto intern = [&](Subset x) {
    auto [it, inserted] = index.try_emplace(x, static_cast<int>(subsets.size()));
    if (inserted) subsets.push_back(std::move(x));
    return it->second;
  };
  Subset start;
  for (int q = 0; q < a.size(); ++q)
    if (a.initial(q)) start.push_back(q);
  intern(start);
  std::vector<int> delta;
  for (std::size_t i = 0; i < subsets.size(); ++i)
    for (int sym = 0; sym < s; ++sym) {
      std::set<int> next;
      for (int q : subsets[i])
        for (int r : a.next(q, sym)) next.insert(r);
      delta.push_back(intern(Subset(next.begin(), next.end())));
    }
  std::vector<bool> final;
  for (const auto& x : subsets)
    final.push_back(std::any_of(x.begin(), x.end(), [&](int q) { return a.final(q); }));
  return Dfa(a.alphabet(), std::move(delta), 0, std::move(final));
}

// Moore partition refinement on the reachable part.
inline Dfa minimize(const Dfa& d) {
  const int s = d.alphabet().size();
  std::vector<int> order{d.initial()};
  std::vector<int> seen(static_cast<std::size_t>(d.size()), -1);
  seen[static_cast<std::size_t>(d.initial())] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int a = 0; a < s; ++a) {
      int r = d.next(order[i], a);
      if (seen[static_cast<std::size_t>(r)] < 0) {
        seen[static_cast<std::size_t>(r)] = static_cast<int>(order.size());
        order.push_back(r);
      }
    }
  const std::size_t n = order.size();
  std::vector<int> block(n);
  for (std::size_t i = 0; i < n; ++i) block[i] = d.final(order[i]) ? 1 : 0;
  int blocks = 0;
  while (true) {
    std::map<std::vector<int>, int> sig;
    std::vector<int> refined(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<int> key{block[i]};
      for (int a = 0; a < s; ++a) key.push_back(block[static_cast<std::size_t>(seen[static_cast<std::size_t>(d.next(order[i], a))])]);
      refined[i] = sig.try_emplace(std::move(key), static_cast<int>(sig.size())).first->second;
    }
    const int count = static_cast<int>(sig.size());
    block = std::move(refined);
    if (count == blocks) break;
    blocks = count;
  }
  // Renumber blocks by first occurrence in BFS order so the result is canonical.
  std::vector<int> rename(static_cast<std::size_t>(blocks), -1);
  int next_id = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (rename[static_cast<std::size_t>(block[i])] < 0) rename[static_cast<std::size_t>(block[i])] = next_id++;
  std::vector<int> delta(static_cast<std::size_t>(blocks * s));
  std::vector<bool> final(static_cast<std::size_t>(blocks));
  for (std::size_t i = 0; i < n; ++i) {
    const int b = rename[static_cast<std::size_t>(block[i])];
    final[static_cast<std::size_t>(b)] = d.final(order[i]);
    for (int a = 0; a < s; ++a)
      delta[static_cast<std::size_t>(b * s + a)] =
          rename[static_cast<std::size_t>(block[static_cast<std::size_t>(seen[static_cast<std::size_t>(d.next(order[i], a))])])];
  }
  return Dfa(d.alphabet(), std::move(delta), 0, std::move(final));
}

enum class ProductOp { And, Or, Diff };

inline Dfa product(const Dfa& a, const Dfa& b, ProductOp op) {
  if (!(a.alphabet() == b.alphabet())) throw InvalidArgument("product of automata over different alphabets");
  const int s = a.alphabet().size();
  std::map<std::pair<int, int>, int> index;
  std::vector<std::pair<int, int>> pairs;
  auto intern = [&](std::pair<int, int> p) {
    auto [it, inserted] = index.try_emplace(p, static_cast<int>(pairs.size()));
    if (inserted) pairs.push_back(p);
    return it->second;
  };
  intern({a.initial(), b.initial()});
  std::vector<int> delta;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (int sym = 0; sym < s; ++sym) {
      auto [p, q] = pairs[i];
      delta.push_back(intern({a.next(p, sym), b.next(q, sym)}));
    }
  std::vector<bool> final;
  for (auto [p, q] : pairs) {
    bool x = a.final(p), y = b.final(q);
    final.push_back(op == ProductOp::And ? (x && y) : op == ProductOp::Or ? (x || y) : (x && !y));
  }
  return Dfa(a.alphabet(), std::move(delta), 0, std::move(final));
}

inline Dfa complement(const Dfa& d) {
  std::vector<bool> final;
  for (int q = 0; q < d.size(); ++q) final.push_back(!d.final(q));
  return Dfa(d.alphabet(), d.table(), d.initial(), std::move(final));
}

// Language equality on the reachable parts.
inline bool equivalent(const Dfa& a, const Dfa& b) {
  Dfa diff = product(a, b, ProductOp::Diff);
  Dfa back = product(b, a, ProductOp::Diff);
  for (int q = 0; q < diff.size(); ++q)
    if (diff.final(q)) return false;
  for (int q = 0; q < back.size(); ++q)
    if (back.final(q)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Transition monoid
// ---------------------------------------------------------------------------

using StateMap = std::vector<int>; // q -> delta(q, w)

inline StateMap compose(const StateMap& f, const StateMap& g) { // first f, then g
  StateMap out(f.size());
  for (std::size_t q = 0; q < f.size(); ++q) out[q] = g[static_cast<std::size_t>(f[q])];
  return out;
}

struct TransitionMonoid {
  std::vector<StateMap> elements; // elements[0] is the identity
  std::vector<int> generators;    // symbol -> element index
  std::vector<int> products;      // products[x * size + y] = x then y

  int size() const noexcept { return static_cast<int>(elements.size()); }
  int identity() const noexcept { return 0; }
  int multiply(int x, int y) const { return products[static_cast<std::size_t>(x * size() + y)]; }
  int element_of(std::span<const int> w) const {
    int e = identity();
    for (int a : w) e = multiply(e, generators[static_cast<std::size_t>(a)]);
    return e;
  }
};

inline TransitionMonoid transition_monoid(const Dfa& d, std::size_t max_elements = 200000) {
  const int s = d.alphabet().size();
  TransitionMonoid m;
  std::map<StateMap, int> index;
  auto intern = [&](StateMap f) {
    auto [it, inserted] = index.try_emplace(f, static_cast<int>(m.elements.size()));
    if (inserted) {
      if (m.elements.size() >= max_elements)
        throw CapExceeded("transition monoid exceeds " + std::to_string(max_elements) + " elements");
      m.elements.push_back(std::move(f));
    }
    return it->second;
  };
  StateMap id(static_cast<std::size_t>(d.size()));
  for (int q = 0; q < d.size(); ++q) id[static_cast<std::size_t>(q)] = q;
  intern(id);
  std::vector<StateMap> gens;
  for (int a = 0; a < s; ++a) {
    StateMap g(static_cast<std::size_t>(d.size()));
    for (int q = 0; q < d.size(); ++q) g[static_cast<std::size_t>(q)] = d.next(q, a);
    m.generators.push_back(intern(g));
    gens.push_back(std::move(g));
  }
  // Right Cayley closure: every element is a product of generators.
  std::vector<std::vector<int>> right;
  for (std::size_t i = 0; i < m.elements.size(); ++i) {
    std::vector<int> row;
    for (int a = 0; a < s; ++a) row.push_back(intern(compose(m.elements[i], gens[static_cast<std::size_t>(a)])));
    right.push_back(std::move(row));
  }
  const int n = m.size();
  m.products.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1);
  // Word representatives from the BFS tree give y as a generator sequence.
  std::vector<std::vector<int>> rep(static_cast<std::size_t>(n));
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  done[0] = true;
  std::vector<int> queue{0};
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (int a = 0; a < s; ++a) {
      int y = right[static_cast<std::size_t>(queue[i])][static_cast<std::size_t>(a)];
      if (!done[static_cast<std::size_t>(y)]) {
        done[static_cast<std::size_t>(y)] = true;
        rep[static_cast<std::size_t>(y)] = rep[static_cast<std::size_t>(queue[i])];
        rep[static_cast<std::size_t>(y)].push_back(a);
        queue.push_back(y);
      }
    }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int e = x;
      for (int a : rep[static_cast<std::size_t>(y)]) e = right[static_cast<std::size_t>(e)][static_cast<std::size_t>(a)];
      m.products[static_cast<std::size_t>(x * n + y)] = e;
    }
  return m;
}

// e^i = e^{i+1} for some i: the functional graph of e has only fixed-point cycles.
inline bool is_aperiodic_map(const StateMap& e) {
  const std::size_t n = e.size();
  for (std::size_t q = 0; q < n; ++q) {
    // Walk n steps to land on a cycle, then test for a fixed point.
    std::size_t x = q;
    for (std::size_t i = 0; i < n; ++i) x = static_cast<std::size_t>(e[x]);
    if (static_cast<std::size_t>(e[x]) != x) return false;
  }
  return true;
}

inline bool is_aperiodic(const TransitionMonoid& m) {
  return std::all_of(m.elements.begin(), m.elements.end(), is_aperiodic_map);
}

inline bool is_aperiodic(const Dfa& d) { return is_aperiodic(transition_monoid(d)); }
inline bool is_aperiodic(const Nfa& a) { return is_aperiodic(subset_construction(a)); }

namespace detail {

inline StateMap map_power(StateMap base, std::uint64_t e) {
  StateMap out(base.size());
  for (std::size_t q = 0; q < out.size(); ++q) out[q] = static_cast<int>(q);
  while (e > 0) {
    if (e & 1) out = compose(out, base);
    base = compose(base, base);
    e >>= 1;
  }
  return out;
}

} // namespace detail

// Checks delta(s, w^n) = delta(s, w^{n+1}) for every state and every w with
// 1 <= |w| <= max_len, n = min(|Q|!, |Q|^|Q|). Bounded test oracle.
inline bool definition_check_aperiodic(const Dfa& d, int max_len) {
  const std::uint64_t q = static_cast<std::uint64_t>(d.size());
  const std::uint64_t cap = std::uint64_t{1} << 62;
  std::uint64_t fact = 1, pow = 1;
  for (std::uint64_t i = 1; i <= q; ++i) {
    fact = fact > cap / i ? cap : fact * i;
    pow = pow > cap / q ? cap : pow * q;
  }
  const std::uint64_t n = std::min(fact, pow);
  bool ok = true;
  for_each_word(d.alphabet(), 1, max_len, [&](const Word& w) {
    if (!ok) return;
    StateMap f(static_cast<std::size_t>(d.size()));
    for (int s = 0; s < d.size(); ++s) f[static_cast<std::size_t>(s)] = d.run(s, w.letters());
    StateMap fn = detail::map_power(f, n);
    if (compose(fn, f) != fn) ok = false;
  });
  return ok;
}

} // namespace strlogic

#endif // STRLOGIC_AUTOMATA_HPP
