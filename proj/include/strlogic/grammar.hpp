#ifndef STRLOGIC_GRAMMAR_HPP
#define STRLOGIC_GRAMMAR_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"

namespace strlogic {

// ε-free context-free grammar in Chomsky normal form. Every nonterminal is
// productive and reachable; an empty language keeps only its start symbol.
class Grammar {
public:
  struct BinaryRule {
    int lhs, left, right;
    friend auto operator<=>(const BinaryRule&, const BinaryRule&) = default;
  };
  struct TerminalRule {
    int lhs, symbol; // symbol is an index into terminals()
    friend auto operator<=>(const TerminalRule&, const TerminalRule&) = default;
  };

  Grammar(Alphabet terminals, std::vector<std::string> nonterminals, int start, std::vector<BinaryRule> binary,
          std::vector<TerminalRule> terminal)
      : terminals_(std::move(terminals)), names_(std::move(nonterminals)), start_(start),
        binary_(std::move(binary)), terminal_(std::move(terminal)) {
    by_left_.resize(names_.size());
    for (const auto& r : binary_) by_left_[static_cast<std::size_t>(r.left)].push_back({r.lhs, r.right});
  }

  const Alphabet& terminals() const noexcept { return terminals_; }
  const std::vector<std::string>& nonterminals() const noexcept { return names_; }
  int nonterminal_count() const noexcept { return static_cast<int>(names_.size()); }
  int start() const noexcept { return start_; }
  const std::vector<BinaryRule>& binary_rules() const noexcept { return binary_; }
  const std::vector<TerminalRule>& terminal_rules() const noexcept { return terminal_; }
  std::size_t rule_count() const noexcept { return binary_.size() + terminal_.size(); }

  // (lhs, right) pairs of binary rules whose left child is `left`.
  const std::vector<std::pair<int, int>>& rules_with_left(int left) const {
    return by_left_[static_cast<std::size_t>(left)];
  }

  bool empty_language() const noexcept { return binary_.empty() && terminal_.empty(); }

  // Line-oriented text form accepted by parse_grammar.
  std::string to_text() const {
    std::ostringstream out;
    out << "terminals:";
    for (char c : terminals_.symbols()) {
      if (c == '#' || c == '\'') out << " '" << c << '\'';
      else out << ' ' << c;
    }
    out << "\nstart: " << names_[static_cast<std::size_t>(start_)] << '\n';
    for (const auto& r : terminal_)
      out << names_[static_cast<std::size_t>(r.lhs)] << " -> '" << terminals_.symbol(r.symbol) << "'\n";
    for (const auto& r : binary_)
      out << names_[static_cast<std::size_t>(r.lhs)] << " -> " << names_[static_cast<std::size_t>(r.left)] << ' '
          << names_[static_cast<std::size_t>(r.right)] << '\n';
    return out.str();
  }

private:
  Alphabet terminals_;
  std::vector<std::string> names_;
  int start_;
  std::vector<BinaryRule> binary_;
  std::vector<TerminalRule> terminal_;
  std::vector<std::vector<std::pair<int, int>>> by_left_;
};

// Collects arbitrary ε-allowing rules and normalizes them into a Grammar.
// ε is dropped from the generated language.
class GrammarBuilder {
public:
  struct Symbol {
    bool terminal;
    int id; // terminal: symbol char; nonterminal: builder index
  };

  explicit GrammarBuilder(Alphabet terminals) : terminals_(std::move(terminals)) {}

  const Alphabet& terminals() const noexcept { return terminals_; }

  Symbol t(char c) const {
    terminals_.require(c);
    return Symbol{true, static_cast<unsigned char>(c)};
  }

  Symbol n(const std::string& name) { return Symbol{false, nonterminal(name)}; }

  int nonterminal(const std::string& name) {
    auto [it, inserted] = index_.try_emplace(name, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(name);
    return it->second;
  }

  void set_start(const std::string& name) { start_ = nonterminal(name); }

  void add(const std::string& lhs, std::vector<Symbol> rhs) {
    int a = nonterminal(lhs);
    rules_.push_back({a, std::move(rhs)});
  }

  // Copies g's rules with nonterminals renamed `prefix + name`; terminals are
  // passed through `map_terminal` (identity by default). Returns the renamed start.
  std::string import(const Grammar& g, const std::string& prefix,
                     const std::function<Symbol(char)>& map_terminal = {}) {
    auto name = [&](int i) { return prefix + g.nonterminals()[static_cast<std::size_t>(i)]; };
    auto term = [&](int sym) {
      char c = g.terminals().symbol(sym);
      return map_terminal ? map_terminal(c) : t(c);
    };
    nonterminal(name(g.start()));
    for (const auto& r : g.terminal_rules()) add(name(r.lhs), {term(r.symbol)});
    for (const auto& r : g.binary_rules()) add(name(r.lhs), {n(name(r.left)), n(name(r.right))});
    return name(g.start());
  }

  Grammar build() const;

private:
  struct Rule {
    int lhs;
    std::vector<Symbol> rhs;
  };
  Alphabet terminals_;
  std::vector<std::string> names_;
  std::map<std::string, int> index_;
  std::vector<Rule> rules_;
  int start_ = -1;
};

inline Grammar GrammarBuilder::build() const {
  if (start_ < 0) throw InvalidArgument("grammar has no start symbol");
  std::vector<std::string> names = names_;
  std::set<std::string> taken(names.begin(), names.end());
  auto fresh = [&](const std::string& stem) {
    std::string s = stem;
    for (int i = 1; taken.count(s); ++i) s = stem + "." + std::to_string(i);
    taken.insert(s);
    names.push_back(s);
    return static_cast<int>(names.size()) - 1;
  };

  // Work rules: rhs entries are nonterminal indices, or -(char+1) for terminals.
  using Rhs = std::vector<int>;
  std::vector<std::pair<int, Rhs>> work;
  std::map<char, int> term_nt;
  auto encode = [](const Symbol& s) { return s.terminal ? -(s.id + 1) : s.id; };

  // TERM + BIN
  for (const auto& r : rules_) {
    Rhs rhs;
    for (const auto& s : r.rhs) rhs.push_back(encode(s));
    if (rhs.size() >= 2) {
      for (int& x : rhs) {
        if (x < 0) {
          char c = static_cast<char>(-x - 1);
          auto it = term_nt.find(c);
          if (it == term_nt.end()) {
            int nt = fresh(std::isalnum(static_cast<unsigned char>(c)) ? std::string("T_") + c
                                                                         : "T_" + std::to_string(static_cast<int>(c)));
            work.push_back({nt, {x}});
            it = term_nt.emplace(c, nt).first;
          }
          x = it->second;
        }
      }
    }
    int lhs = r.lhs;
    while (rhs.size() > 2) {
      int rest = fresh(names[static_cast<std::size_t>(r.lhs)] + "_");
      work.push_back({lhs, {rhs[0], rest}});
      rhs.erase(rhs.begin());
      lhs = rest;
    }
    work.push_back({lhs, rhs});
  }

  const std::size_t count = names.size();

  // DEL
  std::vector<bool> nullable(count, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [a, rhs] : work) {
      if (nullable[static_cast<std::size_t>(a)]) continue;
      if (std::all_of(rhs.begin(), rhs.end(), [&](int x) { return x >= 0 && nullable[static_cast<std::size_t>(x)]; })) {
        nullable[static_cast<std::size_t>(a)] = true;
        changed = true;
      }
    }
  }
  std::set<std::pair<int, Rhs>> rules;
  for (const auto& [a, rhs] : work) {
    if (rhs.empty()) continue;
    rules.insert({a, rhs});
    if (rhs.size() == 2) {
      if (rhs[0] >= 0 && nullable[static_cast<std::size_t>(rhs[0])]) rules.insert({a, {rhs[1]}});
      if (rhs[1] >= 0 && nullable[static_cast<std::size_t>(rhs[1])]) rules.insert({a, {rhs[0]}});
    }
  }

  // UNIT
  std::vector<std::set<int>> unit_closure(count);
  for (std::size_t a = 0; a < count; ++a) unit_closure[a].insert(static_cast<int>(a));
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [a, rhs] : rules) {
      if (rhs.size() != 1 || rhs[0] < 0) continue;
      // a => rhs[0]; everything reaching a by units also reaches closure(rhs[0])
      for (std::size_t x = 0; x < count; ++x) {
        auto& cx = unit_closure[x];
        if (!cx.count(a)) continue;
        for (int y : unit_closure[static_cast<std::size_t>(rhs[0])])
          if (cx.insert(y).second) changed = true;
        if (cx.insert(rhs[0]).second) changed = true;
      }
    }
  }
  std::set<std::pair<int, Rhs>> proper;
  for (std::size_t a = 0; a < count; ++a)
    for (const auto& [b, rhs] : rules)
      if (unit_closure[a].count(b) && !(rhs.size() == 1 && rhs[0] >= 0)) proper.insert({static_cast<int>(a), rhs});

  // productive
  std::vector<bool> productive(count, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [a, rhs] : proper) {
      if (productive[static_cast<std::size_t>(a)]) continue;
      if (std::all_of(rhs.begin(), rhs.end(), [&](int x) { return x < 0 || productive[static_cast<std::size_t>(x)]; })) {
        productive[static_cast<std::size_t>(a)] = true;
        changed = true;
      }
    }
  }
  // reachable through productive rules
  std::vector<bool> reachable(count, false);
  std::vector<int> stack;
  if (productive[static_cast<std::size_t>(start_)]) {
    reachable[static_cast<std::size_t>(start_)] = true;
    stack.push_back(start_);
  }
  auto rule_ok = [&](const Rhs& rhs) {
    return std::all_of(rhs.begin(), rhs.end(), [&](int x) { return x < 0 || productive[static_cast<std::size_t>(x)]; });
  };
  while (!stack.empty()) {
    int a = stack.back();
    stack.pop_back();
    for (auto it = proper.lower_bound({a, {}}); it != proper.end() && it->first == a; ++it) {
      if (!rule_ok(it->second)) continue;
      for (int x : it->second)
        if (x >= 0 && !reachable[static_cast<std::size_t>(x)]) {
          reachable[static_cast<std::size_t>(x)] = true;
          stack.push_back(x);
        }
    }
  }

  std::vector<int> remap(count, -1);
  std::vector<std::string> out_names;
  auto keep = [&](int a) {
    if (remap[static_cast<std::size_t>(a)] < 0) {
      remap[static_cast<std::size_t>(a)] = static_cast<int>(out_names.size());
      out_names.push_back(names[static_cast<std::size_t>(a)]);
    }
    return remap[static_cast<std::size_t>(a)];
  };
  keep(start_);
  for (std::size_t a = 0; a < count; ++a)
    if (reachable[a]) keep(static_cast<int>(a));

  std::vector<Grammar::BinaryRule> binary;
  std::vector<Grammar::TerminalRule> terminal;
  for (const auto& [a, rhs] : proper) {
    if (!reachable[static_cast<std::size_t>(a)] || !rule_ok(rhs)) continue;
    if (rhs.size() == 1) {
      char c = static_cast<char>(-rhs[0] - 1);
      terminal.push_back({remap[static_cast<std::size_t>(a)], terminals_.require(c)});
    } else {
      binary.push_back({remap[static_cast<std::size_t>(a)], remap[static_cast<std::size_t>(rhs[0])],
                        remap[static_cast<std::size_t>(rhs[1])]});
    }
  }
  std::sort(binary.begin(), binary.end());
  std::sort(terminal.begin(), terminal.end());
  return Grammar(terminals_, std::move(out_names), 0, std::move(binary), std::move(terminal));
}

// ---------------------------------------------------------------------------
// Text format
//
//   # comment
//   terminals: a b           (optional; otherwise order of first appearance)
//   start: S
//   S -> A B | 'a' S 'b' | ''
//
// Quoted single characters are terminals, '' is the empty word, anything else
// is a nonterminal name. Rules may be arbitrary; they are normalized to CNF.
// ---------------------------------------------------------------------------

inline Grammar parse_grammar(std::string_view text) {
  struct RawRule {
    std::string lhs;
    std::vector<std::pair<bool, std::string>> rhs; // (terminal, text)
  };
  std::vector<RawRule> raw;
  std::string declared_terminals;
  bool have_terminals = false;
  std::string start;
  std::string seen_terminals;

  std::size_t offset = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    std::size_t hash = std::string::npos;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '\'') {
        if (i + 2 < line.size() && line[i + 2] == '\'' && line[i + 1] != '\'') { i += 2; continue; }
        if (i + 2 < line.size() && line[i + 1] == '\'' && line[i + 2] == '\'') { i += 2; continue; }
        quoted = !quoted;
      }
      if (line[i] == '#' && !quoted) { hash = i; break; }
    }
    if (hash != std::string::npos) line.resize(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();

    if (line.rfind("terminals:", 0) == 0) {
      have_terminals = true;
      std::istringstream toks(line.substr(10));
      for (std::string tok; toks >> tok;) {
        if (tok.size() == 3 && tok.front() == '\'' && tok.back() == '\'') tok = tok.substr(1, 1);
        if (tok.size() != 1) throw SyntaxError("terminals are single characters, optionally quoted", line_offset);
        declared_terminals += tok;
      }
      continue;
    }
    if (line.rfind("start:", 0) == 0) {
      std::istringstream s(line.substr(6));
      s >> start;
      continue;
    }
    auto arrow = line.find("->");
    if (arrow == std::string::npos) throw SyntaxError("expected 'A -> ...' rule", line_offset);
    std::string lhs = line.substr(0, arrow);
    while (!lhs.empty() && std::isspace(static_cast<unsigned char>(lhs.back()))) lhs.pop_back();
    if (lhs.empty() || lhs.find_first_of(" \t") != std::string::npos)
      throw SyntaxError("bad left-hand side", line_offset);
    if (start.empty()) start = lhs;

    RawRule current{lhs, {}};
    std::size_t i = arrow + 2;
    while (true) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size() || line[i] == '|') {
        raw.push_back(current);
        current.rhs.clear();
        if (i >= line.size()) break;
        ++i;
        continue;
      }
      if (line[i] == '\'') {
        if (i + 1 < line.size() && line[i + 1] == '\'' && (i + 2 >= line.size() || line[i + 2] != '\'')) {
          i += 2; // ''
          continue;
        }
        if (i + 2 >= line.size() || line[i + 2] != '\'') throw SyntaxError("bad terminal literal", line_offset + i);
        char c = line[i + 1];
        current.rhs.push_back({true, std::string(1, c)});
        if (seen_terminals.find(c) == std::string::npos) seen_terminals += c;
        i += 3;
        continue;
      }
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '|' && line[j] != '\'') ++j;
      current.rhs.push_back({false, line.substr(i, j - i)});
      i = j;
    }
  }
  if (start.empty()) throw SyntaxError("grammar has no rules", 0);
  std::string symbols = have_terminals ? declared_terminals : seen_terminals;
  if (symbols.empty()) throw SyntaxError("grammar has no terminals", 0);
  GrammarBuilder b{Alphabet(symbols)};
  b.set_start(start);
  for (const auto& r : raw) {
    std::vector<GrammarBuilder::Symbol> rhs;
    for (const auto& [is_terminal, s] : r.rhs) rhs.push_back(is_terminal ? b.t(s[0]) : b.n(s));
    b.add(r.lhs, std::move(rhs));
  }
  return b.build();
}

// ---------------------------------------------------------------------------
// CYK membership
// ---------------------------------------------------------------------------

namespace detail {

class NtSet {
public:
  explicit NtSet(int n = 0) : bits_(static_cast<std::size_t>((n + 63) / 64), 0) {}
  void set(int i) { bits_[static_cast<std::size_t>(i >> 6)] |= std::uint64_t{1} << (i & 63); }
  bool test(int i) const { return (bits_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u; }
  template <class Fn> void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      std::uint64_t b = bits_[w];
      while (b) {
        int bit = __builtin_ctzll(b);
        fn(static_cast<int>(w * 64) + bit);
        b &= b - 1;
      }
    }
  }
  bool any() const {
    return std::any_of(bits_.begin(), bits_.end(), [](std::uint64_t b) { return b != 0; });
  }

private:
  std::vector<std::uint64_t> bits_;
};

} // namespace detail

// True iff the start symbol derives w. O(n^3 * |rules|).
inline bool cyk_member(const Grammar& g, std::span<const int> letters) {
  const int n = static_cast<int>(letters.size());
  if (n == 0 || g.empty_language()) return false;
  const int nts = g.nonterminal_count();
  // table[i][len-1] for span starting at i
  std::vector<detail::NtSet> table(static_cast<std::size_t>(n * n), detail::NtSet(nts));
  auto cell = [&](int i, int len) -> detail::NtSet& { return table[static_cast<std::size_t>(i * n + len - 1)]; };
  for (int i = 0; i < n; ++i)
    for (const auto& r : g.terminal_rules())
      if (r.symbol == letters[static_cast<std::size_t>(i)]) cell(i, 1).set(r.lhs);
  for (int len = 2; len <= n; ++len) {
    for (int i = 0; i + len <= n; ++i) {
      detail::NtSet& target = cell(i, len);
      for (int split = 1; split < len; ++split) {
        const detail::NtSet& left = cell(i, split);
        const detail::NtSet& right = cell(i + split, len - split);
        left.for_each([&](int b) {
          for (const auto& [a, c] : g.rules_with_left(b))
            if (right.test(c)) target.set(a);
        });
      }
    }
  }
  return cell(0, n).test(g.start());
}

inline bool cyk_member(const Grammar& g, const Word& w) {
  if (!(w.alphabet() == g.terminals()))
    throw InvalidArgument("word alphabet " + w.alphabet().to_string() + " does not match grammar terminals " +
                          g.terminals().to_string());
  if (w.empty()) throw InvalidArgument("membership is defined for nonempty words only");
  return cyk_member(g, w.letters());
}

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

// One-sided Dyck language D_t over "()[]{}<>"[0, 2t), without ε.
inline Grammar dyck_grammar(int t) {
  if (t < 1 || t > 4) throw InvalidArgument("dyck_grammar supports 1 <= t <= 4");
  const std::string_view brackets = "()[]{}<>";
  GrammarBuilder b{Alphabet(brackets.substr(0, static_cast<std::size_t>(2 * t)))};
  b.set_start("S");
  b.add("S", {b.n("S"), b.n("S")});
  for (int i = 0; i < t; ++i) {
    char open = brackets[static_cast<std::size_t>(2 * i)];
    char close = brackets[static_cast<std::size_t>(2 * i + 1)];
    b.add("S", {b.t(open), b.n("S"), b.t(close)});
    b.add("S", {b.t(open), b.t(close)});
  }
  return b.build();
}

// Language accepted by either grammar; both must share one terminal alphabet,
// or g2's terminals must be a subset of g1's.
inline Grammar grammar_union(const Grammar& g1, const Grammar& g2) {
  for (char c : g2.terminals().symbols())
    if (!g1.terminals().contains(c)) throw InvalidArgument("grammar_union: terminal alphabets differ");
  GrammarBuilder b{g1.terminals()};
  b.set_start("U");
  std::string s1 = b.import(g1, "1.");
  std::string s2 = b.import(g2, "2.");
  b.add("U", {b.n(s1)});
  b.add("U", {b.n(s2)});
  return b.build();
}

// L2 = { w1 #+ w2 #+ ... wn #+ : each wj nonempty over A, some wi in L(g1) }.
// Terminal order is (pad, a1, ..., ak) so a leading quantifier body can select the pad.
inline Grammar exists_merge(const Grammar& g1, char pad) {
  if (g1.terminals().contains(pad)) throw InvalidArgument(std::string("exists_merge: pad symbol '") + pad + "' clashes");
  std::string symbols(1, pad);
  symbols += g1.terminals().symbols();
  GrammarBuilder b{Alphabet(symbols)};
  b.set_start("M");
  std::string inner = b.import(g1, "L1.");
  for (char a : g1.terminals().symbols()) {
    b.add("Word", {b.t(a), b.n("Word")});
    b.add("Word", {b.t(a)});
  }
  b.add("Pads", {b.t(pad), b.n("Pads")});
  b.add("Pads", {b.t(pad)});
  b.add("Block", {b.n("Word"), b.n("Pads")});
  b.add("Blocks", {b.n("Block"), b.n("Blocks")});
  b.add("Blocks", {});
  b.add("Hit", {b.n(inner), b.n("Pads")});
  b.add("M", {b.n("Blocks"), b.n("Hit"), b.n("Blocks")});
  return b.build();
}

// Complement of L2 ∪ L1 over (pad, a1, ..., ak), given a grammar for the
// complement of L1 over A+. A word is outside iff it has no pad and lies
// outside L1, or has a pad but not the block shape (A+ pad+)+, or has the block
// shape with every block outside L1.
inline Grammar exists_merge_complement(const Grammar& co_g1, char pad) {
  if (co_g1.terminals().contains(pad))
    throw InvalidArgument(std::string("exists_merge_complement: pad symbol '") + pad + "' clashes");
  std::string symbols(1, pad);
  symbols += co_g1.terminals().symbols();
  GrammarBuilder b{Alphabet(symbols)};
  b.set_start("C");
  std::string co = b.import(co_g1, "co.");
  for (char a : co_g1.terminals().symbols()) {
    b.add("Letters", {b.t(a), b.n("Letters")});
    b.add("Letters", {b.t(a)});
  }
  for (char c : symbols) b.add("Any", {b.t(c), b.n("Any")});
  b.add("Any", {});
  b.add("Pads", {b.t(pad), b.n("Pads")});
  b.add("Pads", {b.t(pad)});
  b.add("Misses", {b.n(co), b.n("Pads"), b.n("Misses")});
  b.add("Misses", {b.n(co), b.n("Pads")});
  b.add("C", {b.n(co)});
  b.add("C", {b.t(pad), b.n("Any")});
  b.add("C", {b.n("Any"), b.t(pad), b.n("Letters")});
  b.add("C", {b.n("Misses")});
  return b.build();
}

// Inserts arbitrarily many `pad` symbols anywhere into words of L(g).
inline Grammar pad_language(const Grammar& g, char pad) {
  if (g.terminals().contains(pad)) throw InvalidArgument(std::string("pad_language: pad symbol '") + pad + "' clashes");
  std::string symbols(g.terminals().symbols());
  symbols += pad;
  GrammarBuilder b{Alphabet(symbols)};
  b.set_start("S");
  b.add("Pad", {b.t(pad), b.n("Pad")});
  b.add("Pad", {});
  std::string start = b.import(g, "G.", [&](char c) {
    std::string nt = std::string("Padded_") + c;
    b.add(nt, {b.n("Pad"), b.t(c), b.n("Pad")});
    return b.n(nt);
  });
  b.add("S", {b.n(start)});
  return b.build();
}

// A context-free language together with a grammar for its complement.
struct GrammarPair {
  Grammar language;
  Grammar complement;
};

// h(L) for the substitution
//   h(a_i) = $ ~L1 #* ... #* ~L(i-1) #* Li # B*      (i < s)
//   h(a_s) = $ ~L1 #* ... #* ~L(s-1) #*
// where B is the output alphabet (inner symbols, #, $). `parts` holds L1..L(s-1)
// with their complements; an extra s-th part is accepted and unused.
inline Grammar substitution_language(const Grammar& outer, const std::vector<GrammarPair>& parts, char pad,
                                     char sep) {
  const int s = outer.terminals().size();
  if (static_cast<int>(parts.size()) != s - 1 && static_cast<int>(parts.size()) != s)
    throw InvalidArgument("substitution_language: expected " + std::to_string(s - 1) + " parts");
  if (s > 1 && parts.empty()) throw InvalidArgument("substitution_language: missing parts");
  std::string inner;
  if (!parts.empty()) inner = std::string(parts.front().language.terminals().symbols());
  for (const auto& p : parts) {
    if (std::string(p.language.terminals().symbols()) != inner ||
        std::string(p.complement.terminals().symbols()) != inner)
      throw InvalidArgument("substitution_language: parts must share one inner alphabet");
  }
  if (inner.find(pad) != std::string::npos || inner.find(sep) != std::string::npos || pad == sep)
    throw InvalidArgument("substitution_language: pad/separator symbols must be fresh");
  std::string symbols = inner + pad + sep;
  GrammarBuilder b{Alphabet(symbols)};
  b.set_start("S");
  b.add("Pads", {b.t(pad), b.n("Pads")});
  b.add("Pads", {});
  for (char c : symbols) b.add("Any", {b.t(c), b.n("Any")});
  b.add("Any", {});

  std::vector<std::string> lang_start, comp_start;
  for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(s); ++i) {
    lang_start.push_back(b.import(parts[i].language, "L" + std::to_string(i + 1) + "."));
    comp_start.push_back(b.import(parts[i].complement, "C" + std::to_string(i + 1) + "."));
  }
  for (int i = 0; i < s; ++i) {
    std::string image = "H" + std::to_string(i + 1);
    std::vector<GrammarBuilder::Symbol> rhs{b.t(sep)};
    for (int j = 0; j < i; ++j) {
      rhs.push_back(b.n(comp_start[static_cast<std::size_t>(j)]));
      rhs.push_back(b.n("Pads"));
    }
    if (i < s - 1) {
      rhs.push_back(b.n(lang_start[static_cast<std::size_t>(i)]));
      rhs.push_back(b.t(pad));
      rhs.push_back(b.n("Any"));
    }
    b.add(image, rhs);
  }
  std::string start = b.import(outer, "O.", [&](char c) {
    return b.n("H" + std::to_string(outer.terminals().require(c) + 1));
  });
  b.add("S", {b.n(start)});
  return b.build();
}

// { n <= N : 0^n in L(g) } for a grammar over a one-letter alphabet.
inline std::set<int> length_set(const Grammar& g, int max_len) {
  if (g.terminals().size() != 1) throw InvalidArgument("length_set needs a unary grammar");
  const int nts = g.nonterminal_count();
  std::vector<std::vector<bool>> derives(static_cast<std::size_t>(max_len + 1), std::vector<bool>(static_cast<std::size_t>(nts), false));
  std::set<int> out;
  if (max_len >= 1)
    for (const auto& r : g.terminal_rules()) derives[1][static_cast<std::size_t>(r.lhs)] = true;
  for (int len = 2; len <= max_len; ++len)
    for (int a = 1; a < len; ++a)
      for (const auto& r : g.binary_rules())
        if (derives[static_cast<std::size_t>(a)][static_cast<std::size_t>(r.left)] &&
            derives[static_cast<std::size_t>(len - a)][static_cast<std::size_t>(r.right)])
          derives[static_cast<std::size_t>(len)][static_cast<std::size_t>(r.lhs)] = true;
  for (int len = 1; len <= max_len; ++len)
    if (derives[static_cast<std::size_t>(len)][static_cast<std::size_t>(g.start())]) out.insert(len);
  return out;
}

// ---------------------------------------------------------------------------
// Semi-linear fitting
// ---------------------------------------------------------------------------

struct LinearComponent {
  int base = 0;
  std::vector<int> periods; // empty: the singleton {base}
  friend bool operator==(const LinearComponent&, const LinearComponent&) = default;
};

struct LinearSetUnion {
  std::vector<LinearComponent> components;

  bool contains(int n) const {
    for (const auto& c : components) {
      if (n < c.base) continue;
      if (n == c.base) return true;
      // unary linear set: base + nonnegative combinations of the periods
      const int diff = n - c.base;
      std::vector<bool> reach(static_cast<std::size_t>(diff + 1), false);
      reach[0] = true;
      for (int x = 1; x <= diff; ++x)
        for (int p : c.periods)
          if (p > 0 && x >= p && reach[static_cast<std::size_t>(x - p)]) { reach[static_cast<std::size_t>(x)] = true; break; }
      if (reach[static_cast<std::size_t>(diff)]) return true;
    }
    return false;
  }

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (i) out += ", ";
      out += "(" + std::to_string(components[i].base) + ", {";
      for (std::size_t j = 0; j < components[i].periods.size(); ++j) {
        if (j) out += ",";
        out += std::to_string(components[i].periods[j]);
      }
      out += "})";
    }
    return out + "}";
  }
};

// Bounds of the desk-scale semi-linear detector.
struct SemilinearFitLimits {
  int max_components = 8;
};

// Looks for a union of at most 8 progressions (b, {p}) or singletons (b, {})
// with every base b <= N/2 and one common period p <= N/4 that agrees with `s`
// on [0, N]. Tried in order of increasing period, then increasing threshold;
// the first fit with few enough components is returned.
inline std::optional<LinearSetUnion> semilinear_fit(const std::set<int>& s, int max_n,
                                                    SemilinearFitLimits limits = {}) {
  for (int x : s)
    if (x < 0 || x > max_n) throw InvalidArgument("semilinear_fit: set must lie in [0, N]");
  std::vector<bool> in(static_cast<std::size_t>(max_n + 1), false);
  for (int x : s) in[static_cast<std::size_t>(x)] = true;
  const int half = max_n / 2;

  // Finite fit: singletons only.
  if (s.empty()) return LinearSetUnion{};
  if (*s.rbegin() <= half && static_cast<int>(s.size()) <= limits.max_components) {
    LinearSetUnion u;
    for (int x : s) u.components.push_back({x, {}});
    return u;
  }
  for (int p = 1; p <= max_n / 4; ++p) {
    for (int t = 0; t + p - 1 <= half; ++t) {
      bool periodic = true;
      for (int x = t; x + p <= max_n && periodic; ++x)
        if (in[static_cast<std::size_t>(x)] != in[static_cast<std::size_t>(x + p)]) periodic = false;
      if (!periodic) continue;
      LinearSetUnion u;
      for (int x : s)
        if (x < t) u.components.push_back({x, {}});
      for (int x = t; x < t + p; ++x)
        if (in[static_cast<std::size_t>(x)]) u.components.push_back({x, {p}});
      if (static_cast<int>(u.components.size()) <= limits.max_components) return u;
    }
  }
  return std::nullopt;
}

} // namespace strlogic

#endif // STRLOGIC_GRAMMAR_HPP
