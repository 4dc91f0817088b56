#ifndef STRLOGIC_TRANSDUCER_HPP
#define STRLOGIC_TRANSDUCER_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "alphabet.hpp"
#include "automata.hpp"
#include "error.hpp"
#include "formula.hpp"
#include "rank_type.hpp"
#include "semantics.hpp"

namespace strlogic {

// Letter-to-letter nondeterministic transducer with a single initial state.
class Nft {
public:
  struct Transition {
    int from, input, output, to;
    friend auto operator<=>(const Transition&, const Transition&) = default;
  };

  Nft(Alphabet input, Alphabet output, std::vector<std::string> names, int initial)
      : input_(std::move(input)), output_(std::move(output)), names_(std::move(names)), initial_(initial),
        final_(names_.size(), false), out_(names_.size()) {
    check(initial_);
  }

  const Alphabet& input() const noexcept { return input_; }
  const Alphabet& output() const noexcept { return output_; }
  int size() const noexcept { return static_cast<int>(names_.size()); }
  int initial() const noexcept { return initial_; }
  const std::string& name(int q) const { return names_.at(static_cast<std::size_t>(q)); }
  bool final(int q) const { return final_[static_cast<std::size_t>(q)]; }
  void set_final(int q, bool v = true) { check(q); final_[static_cast<std::size_t>(q)] = v; }

  void add_transition(int from, int in, int out, int to) {
    check(from);
    check(to);
    if (in < 0 || in >= input_.size() || out < 0 || out >= output_.size())
      throw InvalidArgument("transition label out of range");
    out_[static_cast<std::size_t>(from)].push_back({from, in, out, to});
  }

  const std::vector<Transition>& transitions_from(int q) const { return out_[static_cast<std::size_t>(q)]; }

  std::size_t transition_count() const {
    std::size_t n = 0;
    for (const auto& v : out_) n += v.size();
    return n;
  }

  // Input projection: forget the outputs.
  Nfa input_projection() const {
    Nfa a(input_, names_);
    a.set_initial(initial_);
    for (int q = 0; q < size(); ++q) {
      a.set_final(q, final(q));
      for (const auto& t : transitions_from(q)) a.add_transition(q, t.input, t.to);
    }
    return a;
  }

  std::string to_text() const {
    std::ostringstream out;
    out << "input:";
    for (char c : input_.symbols()) out << ' ' << c;
    out << "\noutput:";
    for (char c : output_.symbols()) out << ' ' << c;
    out << "\nstates:";
    for (const auto& n : names_) out << ' ' << n;
    out << "\ninitial: " << name(initial_) << "\nfinal:";
    for (int q = 0; q < size(); ++q)
      if (final(q)) out << ' ' << name(q);
    out << '\n';
    for (int q = 0; q < size(); ++q)
      for (const auto& t : transitions_from(q))
        out << "trans: " << name(q) << ' ' << input_.symbol(t.input) << '/' << output_.symbol(t.output) << ' '
            << name(t.to) << '\n';
    return out.str();
  }

private:
  void check(int q) const {
    if (q < 0 || q >= size()) throw InvalidArgument("state out of range");
  }

  Alphabet input_, output_;
  std::vector<std::string> names_;
  int initial_;
  std::vector<bool> final_;
  std::vector<std::vector<Transition>> out_;
};

// Text form: the automaton format with "input:"/"output:" alphabets, a single
// initial state and "trans: q a/b q2" lines.
inline Nft parse_nft(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> states, initial, final;
  std::string insyms, outsyms;
  bool explicit_in = false, explicit_out = false;
  std::vector<std::tuple<std::string, char, char, std::string>> trans;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t at = offset;
    offset += line.size() + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream t(line);
    std::vector<std::string> toks;
    for (std::string tok; t >> tok;) toks.push_back(tok);
    if (toks.empty()) continue;
    const std::string key = toks[0];
    toks.erase(toks.begin());
    auto symbols = [&](std::string& dst) {
      for (const auto& s : toks) {
        if (s.size() != 1) throw SyntaxError("alphabet symbols are single characters", at);
        dst += s;
      }
    };
    if (key == "input:") { explicit_in = true; symbols(insyms); }
    else if (key == "output:") { explicit_out = true; symbols(outsyms); }
    else if (key == "states:") states.insert(states.end(), toks.begin(), toks.end());
    else if (key == "initial:") initial.insert(initial.end(), toks.begin(), toks.end());
    else if (key == "final:") final.insert(final.end(), toks.begin(), toks.end());
    else if (key == "trans:") {
      if (toks.size() != 3 || toks[1].size() != 3 || toks[1][1] != '/')
        throw SyntaxError("expected 'trans: q a/b q2'", at);
      const char a = toks[1][0], b = toks[1][2];
      trans.emplace_back(toks[0], a, b, toks[2]);
      if (!explicit_in && insyms.find(a) == std::string::npos) insyms += a;
      if (!explicit_out && outsyms.find(b) == std::string::npos) outsyms += b;
    } else {
      throw SyntaxError("unknown transducer line '" + key + "'", at);
    }
  }
  if (states.empty()) throw SyntaxError("missing 'states:' line", 0);
  if (initial.size() != 1) throw SyntaxError("a transducer has exactly one initial state", 0);
  if (insyms.empty() || outsyms.empty()) throw SyntaxError("transducer alphabets are empty", 0);
  std::map<std::string, int> index;
  for (const auto& s : states)
    if (!index.emplace(s, static_cast<int>(index.size())).second) throw SyntaxError("duplicate state '" + s + "'", 0);
  auto state = [&](const std::string& s) {
    auto it = index.find(s);
    if (it == index.end()) throw SyntaxError("unknown state '" + s + "'", 0);
    return it->second;
  };
  Nft m(Alphabet(insyms), Alphabet(outsyms), states, state(initial[0]));
  for (const auto& s : final) m.set_final(state(s));
  for (const auto& [p, a, b, q] : trans) {
    auto x = m.input().index_of(a);
    auto y = m.output().index_of(b);
    if (!x || !y) throw SyntaxError("transition symbol not in alphabet", 0);
    m.add_transition(state(p), *x, *y, state(q));
  }
  return m;
}

namespace detail {

// alive[i][q]: from q, the suffix w[i..] can be read into a final state.
inline std::vector<std::vector<bool>> viable(const Nft& m, std::span<const int> w) {
  const std::size_t n = w.size();
  std::vector<std::vector<bool>> alive(n + 1, std::vector<bool>(static_cast<std::size_t>(m.size()), false));
  for (int q = 0; q < m.size(); ++q) alive[n][static_cast<std::size_t>(q)] = m.final(q);
  for (std::size_t i = n; i-- > 0;)
    for (int q = 0; q < m.size(); ++q)
      for (const auto& t : m.transitions_from(q))
        if (t.input == w[i] && alive[i + 1][static_cast<std::size_t>(t.to)]) {
          alive[i][static_cast<std::size_t>(q)] = true;
          break;
        }
  return alive;
}

} // namespace detail

// O_M(w): all outputs of accepting runs on w.
inline std::set<Word> run_outputs(const Nft& m, const Word& w) {
  if (!(w.alphabet() == m.input())) throw InvalidArgument("word is not over the transducer input alphabet");
  auto alive = detail::viable(m, w.letters());
  std::set<Word> out;
  if (!alive[0][static_cast<std::size_t>(m.initial())]) return out;
  // Frontier: output prefix -> states reached, restricted to viable ones.
  std::map<std::vector<int>, std::set<int>> frontier{{{}, {m.initial()}}};
  const auto letters = w.letters();
  for (std::size_t i = 0; i < letters.size(); ++i) {
    std::map<std::vector<int>, std::set<int>> next;
    for (const auto& [prefix, states] : frontier)
      for (int q : states)
        for (const auto& t : m.transitions_from(q))
          if (t.input == letters[i] && alive[i + 1][static_cast<std::size_t>(t.to)]) {
            auto p = prefix;
            p.push_back(t.output);
            next[std::move(p)].insert(t.to);
          }
    frontier = std::move(next);
  }
  for (const auto& [prefix, states] : frontier) out.insert(Word(m.output(), prefix));
  return out;
}

// Reachable and co-reachable part; the initial state is always kept.
inline Nft trim(const Nft& m) {
  const int n = m.size();
  std::vector<bool> reach(static_cast<std::size_t>(n), false), coreach(static_cast<std::size_t>(n), false);
  std::vector<std::vector<int>> back(static_cast<std::size_t>(n));
  std::vector<int> stack{m.initial()};
  reach[static_cast<std::size_t>(m.initial())] = true;
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (const auto& t : m.transitions_from(q)) {
      back[static_cast<std::size_t>(t.to)].push_back(q);
      if (!reach[static_cast<std::size_t>(t.to)]) {
        reach[static_cast<std::size_t>(t.to)] = true;
        stack.push_back(t.to);
      }
    }
  }
  for (int q = 0; q < n; ++q)
    if (reach[static_cast<std::size_t>(q)] && m.final(q)) {
      coreach[static_cast<std::size_t>(q)] = true;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (int p : back[static_cast<std::size_t>(q)])
      if (!coreach[static_cast<std::size_t>(p)]) {
        coreach[static_cast<std::size_t>(p)] = true;
        stack.push_back(p);
      }
  }
  std::vector<int> rename(static_cast<std::size_t>(n), -1);
  std::vector<std::string> names;
  for (int q = 0; q < n; ++q)
    if (q == m.initial() || (reach[static_cast<std::size_t>(q)] && coreach[static_cast<std::size_t>(q)])) {
      rename[static_cast<std::size_t>(q)] = static_cast<int>(names.size());
      names.push_back(m.name(q));
    }
  Nft out(m.input(), m.output(), std::move(names), rename[static_cast<std::size_t>(m.initial())]);
  for (int q = 0; q < n; ++q) {
    const int r = rename[static_cast<std::size_t>(q)];
    if (r < 0) continue;
    out.set_final(r, m.final(q));
    for (const auto& t : m.transitions_from(q))
      if (rename[static_cast<std::size_t>(t.to)] >= 0) out.add_transition(r, t.input, t.output, rename[static_cast<std::size_t>(t.to)]);
  }
  return out;
}

// Quotient by the coarsest bisimulation on futures (same finality, same labelled
// moves into equivalent states). Preserves the input/output relation.
inline Nft reduce_bisimulation(const Nft& m) {
  const int n = m.size();
  std::vector<int> block(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) block[static_cast<std::size_t>(q)] = m.final(q) ? 1 : 0;
  int count = -1;
  while (true) {
    std::map<std::vector<int>, int> sig;
    std::vector<int> refined(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      std::vector<std::array<int, 3>> moves;
      for (const auto& t : m.transitions_from(q)) moves.push_back({t.input, t.output, block[static_cast<std::size_t>(t.to)]});
      std::sort(moves.begin(), moves.end());
      moves.erase(std::unique(moves.begin(), moves.end()), moves.end());
      std::vector<int> key{block[static_cast<std::size_t>(q)]};
      for (const auto& mv : moves) key.insert(key.end(), mv.begin(), mv.end());
      refined[static_cast<std::size_t>(q)] = sig.try_emplace(std::move(key), static_cast<int>(sig.size())).first->second;
    }
    const int c = static_cast<int>(sig.size());
    block = std::move(refined);
    if (c == count) break;
    count = c;
  }
  std::vector<std::string> names(static_cast<std::size_t>(count));
  for (int q = n; q-- > 0;) names[static_cast<std::size_t>(block[static_cast<std::size_t>(q)])] = m.name(q);
  Nft out(m.input(), m.output(), std::move(names), block[static_cast<std::size_t>(m.initial())]);
  std::set<Nft::Transition> seen;
  for (int q = 0; q < n; ++q) {
    const int b = block[static_cast<std::size_t>(q)];
    out.set_final(b, m.final(q));
    for (const auto& t : m.transitions_from(q)) {
      Nft::Transition u{b, t.input, t.output, block[static_cast<std::size_t>(t.to)]};
      if (seen.insert(u).second) out.add_transition(u.from, u.input, u.output, u.to);
    }
  }
  return out;
}

// Every nonempty input has at least one accepting run.
inline bool is_total(const Nft& m) {
  Dfa d = subset_construction(m.input_projection());
  // State 0 is the initial subset (the empty word); every other reachable
  // subset is the image of a nonempty word.
  std::vector<bool> nonempty_reached(static_cast<std::size_t>(d.size()), false);
  std::vector<int> stack;
  for (int a = 0; a < d.alphabet().size(); ++a) stack.push_back(d.next(0, a));
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    if (nonempty_reached[static_cast<std::size_t>(q)]) continue;
    nonempty_reached[static_cast<std::size_t>(q)] = true;
    if (!d.final(q)) return false;
    for (int a = 0; a < d.alphabet().size(); ++a) stack.push_back(d.next(q, a));
  }
  return true;
}

// No input has two different accepting outputs: in the self-product over a
// shared input, no pair of final states is reachable after the outputs differed.
inline bool is_functional(const Nft& m) {
  const auto n = static_cast<std::uint64_t>(m.size());
  auto encode = [&](int p, int q, bool diverged) {
    return (static_cast<std::uint64_t>(p) * n + static_cast<std::uint64_t>(q)) * 2 + (diverged ? 1 : 0);
  };
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::tuple<int, int, bool>> stack{{m.initial(), m.initial(), false}};
  seen.insert(encode(m.initial(), m.initial(), false));
  while (!stack.empty()) {
    auto [p, q, diverged] = stack.back();
    stack.pop_back();
    if (diverged && m.final(p) && m.final(q)) return false;
    for (const auto& s : m.transitions_from(p))
      for (const auto& t : m.transitions_from(q)) {
        if (s.input != t.input) continue;
        const bool d = diverged || s.output != t.output;
        // Symmetric pairs carry the same information.
        int a = s.to, b = t.to;
        if (a > b) std::swap(a, b);
        if (seen.insert(encode(a, b, d)).second) stack.emplace_back(a, b, d);
      }
  }
  return true;
}

// |O_M(w)| = 1 for every nonempty w.
inline bool is_single_valued(const Nft& m) {
  Nft r = reduce_bisimulation(trim(m));
  return is_total(r) && is_functional(r);
}

inline bool is_aperiodic_nft(const Nft& m) { return is_aperiodic(m.input_projection()); }

// ---------------------------------------------------------------------------
// FO translation compiler
// ---------------------------------------------------------------------------

struct CompileOptions {
  std::optional<Signature> signature; // default: Endpoints if min/max occur, else OrderOnly
  bool allow_fallback = true;         // retry at rank k+1 if verification fails
  TypeLimits limits = TypeLimits::from_environment();
};

struct CompiledTranslation {
  Nft machine;
  int rank = 0;            // rank of the types used
  Signature signature = Signature::Endpoints;
  int type_count = 0;      // |S^k|
  bool fell_back = false;
};

namespace detail {

inline bool mentions_endpoints(const Formula& f) {
  bool found = false;
  auto term = [&](const Term& t) { found = found || t.is_constant(); };
  auto rec = [&](auto&& self, const Formula& g) -> void {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, node::Letter>) term(x.term);
          else if constexpr (std::is_same_v<T, node::Eq> || std::is_same_v<T, node::Lt>) { term(x.lhs); term(x.rhs); }
          else if constexpr (std::is_same_v<T, node::Not>) self(self, x.child);
          else if constexpr (std::is_same_v<T, node::And> || std::is_same_v<T, node::Or>) {
            for (const auto& c : x.children) self(self, c);
          } else if constexpr (std::is_same_v<T, node::Exists> || std::is_same_v<T, node::Forall>) self(self, x.body);
        },
        g.node().v);
  };
  rec(rec, f);
  return found;
}

inline bool has_arithmetic(const Formula& f) {
  bool found = false;
  auto rec = [&](auto&& self, const Formula& g) -> void {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, node::Bit> || std::is_same_v<T, node::Plus>) found = true;
          else if constexpr (std::is_same_v<T, node::Not>) self(self, x.child);
          else if constexpr (std::is_same_v<T, node::And> || std::is_same_v<T, node::Or>) {
            for (const auto& c : x.children) self(self, c);
          } else if constexpr (std::is_same_v<T, node::Exists> || std::is_same_v<T, node::Forall>) self(self, x.body);
        },
        g.node().v);
  };
  rec(rec, f);
  return found;
}

inline CompiledTranslation compile_at_rank(const TransformSpec& spec, const Alphabet& sigma, int k, Signature sig,
                                           const TypeLimits& limits) {
  auto monoid = build_type_monoid(sigma, k, sig, limits);
  const TypeMonoid& M = *monoid;
  const int s = sigma.size();
  const int size = M.size();
  const std::string& x = spec.vars.front();

  // preimage[a][y] = { z : a·z = y }
  std::vector<std::vector<std::vector<int>>> preimage(static_cast<std::size_t>(s),
                                                      std::vector<std::vector<int>>(static_cast<std::size_t>(size)));
  for (int a = 0; a < s; ++a)
    for (int z = 0; z < size; ++z)
      preimage[static_cast<std::size_t>(a)][static_cast<std::size_t>(M.prepend(a, z))].push_back(z);

  // tau(Φ1, a, Φ2') from the representatives; Φ1 = unit covers the q0 clause.
  std::unordered_map<std::uint64_t, int> tau_memo;
  auto tau = [&](int left, int a, int right) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(left) * static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(a)) *
            static_cast<std::uint64_t>(size) + static_cast<std::uint64_t>(right);
    if (auto it = tau_memo.find(key); it != tau_memo.end()) return it->second;
    const Word& u = M.representatives[static_cast<std::size_t>(left)];
    const Word& v = M.representatives[static_cast<std::size_t>(right)];
    std::vector<int> letters(u.letters().begin(), u.letters().end());
    letters.push_back(a);
    letters.insert(letters.end(), v.letters().begin(), v.letters().end());
    const int t = select_letter(spec.bodies, Word(sigma, std::move(letters)), {{x, u.length() + 1}});
    tau_memo.emplace(key, t);
    return t;
  };

  // States: 0 = q0, others interned pairs (Φ1, Φ2) with Φ1 ≠ unit.
  std::unordered_map<std::uint64_t, int> index;
  std::vector<std::pair<int, int>> pairs{{-1, -1}};
  std::vector<Nft::Transition> edges;
  auto intern = [&](int p1, int p2) {
    const std::uint64_t key = static_cast<std::uint64_t>(p1) * static_cast<std::uint64_t>(size) + static_cast<std::uint64_t>(p2);
    auto [it, inserted] = index.try_emplace(key, static_cast<int>(pairs.size()));
    if (inserted) pairs.emplace_back(p1, p2);
    return it->second;
  };
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [p1, p2] = pairs[i];
    for (int a = 0; a < s; ++a) {
      const int left = i == 0 ? M.unit() : p1;
      const int next1 = M.append(left, a);
      auto emit = [&](int z) {
        const int to = intern(next1, z);
        edges.push_back({static_cast<int>(i), a, tau(left, a, z), to});
      };
      if (i == 0) {
        for (int z = 0; z < size; ++z) emit(z);
      } else {
        for (int z : preimage[static_cast<std::size_t>(a)][static_cast<std::size_t>(p2)]) emit(z);
      }
    }
  }
  std::vector<std::string> names{"q0"};
  for (std::size_t i = 1; i < pairs.size(); ++i)
    names.push_back("s" + std::to_string(pairs[i].first) + "_" + std::to_string(pairs[i].second));
  Nft raw(sigma, spec.target, std::move(names), 0);
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i].second == M.unit()) raw.set_final(static_cast<int>(i));
  for (const auto& e : edges) raw.add_transition(e.from, e.input, e.output, e.to);
  return CompiledTranslation{trim(raw), k, sig, size, false};
}

} // namespace detail

// Compiles a k=1 transformation with pure-FO bodies (one free variable) into a
// transducer over the types of rank k = max quantifier rank of the bodies.
inline CompiledTranslation compile_fo_translation_detailed(const TransformSpec& spec, const Alphabet& sigma,
                                                           const CompileOptions& opts = {}) {
  validate(spec);
  if (spec.vars.size() != 1) throw InvalidArgument("FO translations are unary: exactly one tuple variable");
  int k = 0;
  bool endpoints = false;
  for (const auto& b : spec.bodies) {
    if (!is_pure_fo(b) || detail::has_arithmetic(b))
      throw InvalidArgument("compile-fo accepts pure FO bodies (no Lindström quantifiers, BIT or PLUS)");
    for (const auto& v : free_vars(b))
      if (v != spec.vars.front()) throw InvalidArgument("body has a free variable other than '" + spec.vars.front() + "'");
    k = std::max(k, quantifier_rank(b));
    endpoints = endpoints || detail::mentions_endpoints(b);
  }
  const Signature sig = opts.signature.value_or(endpoints ? Signature::Endpoints : Signature::OrderOnly);
  if (sig == Signature::OrderOnly && endpoints)
    throw InvalidArgument("bodies mention min/max; the order-only signature cannot express them");
  for (int rank = k;; ++rank) {
    if (rank > opts.limits.max_rank)
      throw CapExceeded("rank " + std::to_string(rank) + " exceeds the cap of " + std::to_string(opts.limits.max_rank));
    auto result = detail::compile_at_rank(spec, sigma, rank, sig, opts.limits);
    result.fell_back = rank != k;
    if (is_single_valued(result.machine) || !opts.allow_fallback) return result;
  }
}

inline Nft compile_fo_translation(const TransformSpec& spec, const Alphabet& sigma, const CompileOptions& opts = {}) {
  return compile_fo_translation_detailed(spec, sigma, opts).machine;
}

// Single formula φ(x): Γ's first letter where φ holds, its second elsewhere.
inline Nft compile_fo_translation(const Formula& phi, const std::string& var, const Alphabet& sigma,
                                  const Alphabet& gamma, const CompileOptions& opts = {}) {
  if (gamma.size() != 2) throw InvalidArgument("a single formula drives a two-letter output alphabet");
  return compile_fo_translation(TransformSpec{{phi}, {var}, gamma}, sigma, opts);
}

} // namespace strlogic

#endif // STRLOGIC_TRANSDUCER_HPP
