#ifndef STRLOGIC_GROUPOID_HPP
#define STRLOGIC_GROUPOID_HPP

#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"
#include "grammar.hpp"

namespace strlogic {

// Finite set with a total binary operation; no laws assumed. Elements are
// single characters so that words over the groupoid are ordinary strings.
class Groupoid {
public:
  Groupoid(Alphabet elements, std::vector<int> table) : elements_(std::move(elements)), table_(std::move(table)) {
    const auto m = static_cast<std::size_t>(elements_.size());
    if (table_.size() != m * m) throw InvalidArgument("groupoid table must have |G|^2 entries");
    for (int x : table_)
      if (x < 0 || x >= elements_.size()) throw InvalidArgument("groupoid table entry out of range");
  }

  const Alphabet& elements() const noexcept { return elements_; }
  int size() const noexcept { return elements_.size(); }
  int multiply(int x, int y) const { return table_[static_cast<std::size_t>(x * size() + y)]; }
  const std::vector<int>& table() const noexcept { return table_; }

private:
  Alphabet elements_;
  std::vector<int> table_;
};

// W(S, G): words over G that multiply to an element of S under some bracketing.
class WordProblem {
public:
  WordProblem(Groupoid groupoid, std::vector<bool> accepting)
      : groupoid_(std::move(groupoid)), accepting_(std::move(accepting)) {
    if (static_cast<int>(accepting_.size()) != groupoid_.size())
      throw InvalidArgument("accepting set must be a subset of the elements");
  }

  const Groupoid& groupoid() const noexcept { return groupoid_; }
  const Alphabet& alphabet() const noexcept { return groupoid_.elements(); }
  bool accepting(int x) const { return accepting_[static_cast<std::size_t>(x)]; }
  const std::vector<bool>& accepting_set() const noexcept { return accepting_; }

  std::string to_text() const {
    std::ostringstream out;
    const Alphabet& e = groupoid_.elements();
    out << "elements:";
    for (char c : e.symbols()) out << ' ' << c;
    out << '\n';
    for (int x = 0; x < e.size(); ++x) {
      out << e.symbol(x) << ':';
      for (int y = 0; y < e.size(); ++y) out << ' ' << e.symbol(groupoid_.multiply(x, y));
      out << '\n';
    }
    out << "accepting:";
    for (int x = 0; x < e.size(); ++x)
      if (accepting(x)) out << ' ' << e.symbol(x);
    out << '\n';
    return out.str();
  }

private:
  Groupoid groupoid_;
  std::vector<bool> accepting_;
};

namespace detail {

// Interval DP; returns the product set of the whole word as a bitset.
inline NtSet product_table(const Groupoid& g, std::span<const int> w) {
  const int n = static_cast<int>(w.size());
  const int m = g.size();
  std::vector<NtSet> cell(static_cast<std::size_t>(n * n), NtSet(m));
  auto at = [&](int i, int len) -> NtSet& { return cell[static_cast<std::size_t>(i * n + len - 1)]; };
  for (int i = 0; i < n; ++i) {
    int x = w[static_cast<std::size_t>(i)];
    if (x < 0 || x >= m) throw InvalidArgument("element not in groupoid");
    at(i, 1).set(x);
  }
  for (int len = 2; len <= n; ++len)
    for (int i = 0; i + len <= n; ++i)
      for (int split = 1; split < len; ++split) {
        const NtSet& left = at(i, split);
        const NtSet& right = at(i + split, len - split);
        NtSet& target = at(i, len);
        left.for_each([&](int x) { right.for_each([&](int y) { target.set(g.multiply(x, y)); }); });
      }
  return at(0, n);
}

} // namespace detail

// All values of w_1 ... w_n over every bracketing. O(n^3 |G|^2).
inline std::set<int> all_products(const Groupoid& g, std::span<const int> w) {
  if (w.empty()) throw InvalidArgument("all_products needs a nonempty word");
  std::set<int> out;
  detail::product_table(g, w).for_each([&](int x) { out.insert(x); });
  return out;
}

inline std::set<int> all_products(const Groupoid& g, const Word& w) {
  if (!(w.alphabet() == g.elements())) throw InvalidArgument("word is not over the groupoid elements");
  return all_products(g, w.letters());
}

inline bool wp_member(const WordProblem& wp, std::span<const int> w) {
  if (w.empty()) throw InvalidArgument("wp_member needs a nonempty word");
  bool hit = false;
  detail::product_table(wp.groupoid(), w).for_each([&](int x) { hit = hit || wp.accepting(x); });
  return hit;
}

inline bool wp_member(const WordProblem& wp, const Word& w) {
  if (!(w.alphabet() == wp.alphabet())) throw InvalidArgument("word is not over the groupoid elements");
  return wp_member(wp, w.letters());
}

// Text form:
//   elements: a b c
//   a: b a c        (row for a; the "a:" label is optional)
//   ...
//   accepting: a c
inline WordProblem parse_groupoid(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<Alphabet> elements;
  std::vector<std::vector<char>> rows;
  std::vector<char> accepting;
  bool have_accepting = false;
  std::size_t offset = 0;
  auto tokens = [](const std::string& s) {
    std::vector<char> out;
    std::istringstream t(s);
    std::string tok;
    while (t >> tok) {
      if (tok.size() != 1) throw SyntaxError("groupoid elements are single characters, got '" + tok + "'", 0);
      out.push_back(tok[0]);
    }
    return out;
  };
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (auto hash = line.find("//"); hash != std::string::npos) line.resize(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first);
    if (line.rfind("elements:", 0) == 0) {
      auto syms = tokens(line.substr(9));
      elements = Alphabet(std::string(syms.begin(), syms.end()));
      continue;
    }
    if (line.rfind("accepting:", 0) == 0) {
      accepting = tokens(line.substr(10));
      have_accepting = true;
      continue;
    }
    if (!elements) throw SyntaxError("table row before 'elements:' line", line_offset);
    if (line.size() >= 2 && line[1] == ':') {
      if (line[0] != elements->symbol(static_cast<int>(rows.size() % static_cast<std::size_t>(elements->size()))))
        throw SyntaxError(std::string("row label '") + line[0] + "' out of order", line_offset);
      line = line.substr(2);
    }
    rows.push_back(tokens(line));
  }
  if (!elements) throw SyntaxError("missing 'elements:' line", 0);
  const int m = elements->size();
  if (static_cast<int>(rows.size()) != m)
    throw SyntaxError("expected " + std::to_string(m) + " table rows, got " + std::to_string(rows.size()), 0);
  std::vector<int> table;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != m) throw SyntaxError("table row has wrong length", 0);
    for (char c : row) table.push_back(elements->require(c));
  }
  if (!have_accepting) throw SyntaxError("missing 'accepting:' line", 0);
  std::vector<bool> acc(static_cast<std::size_t>(m), false);
  for (char c : accepting) acc[static_cast<std::size_t>(elements->require(c))] = true;
  return WordProblem(Groupoid(*elements, std::move(table)), std::move(acc));
}

// Result of the power-set construction: a word problem plus the map from
// grammar terminals to groupoid elements.
struct GroupoidEmbedding {
  WordProblem problem;
  std::vector<int> letter_element;             // terminal index -> element
  std::vector<std::vector<int>> element_sets;  // element -> nonterminal subset

  Word embed(const Word& w) const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(w.length()));
    for (int l : w.letters()) out.push_back(letter_element[static_cast<std::size_t>(l)]);
    return Word(problem.alphabet(), std::move(out));
  }
};

// Printable characters used to name generated groupoid elements.
inline constexpr std::string_view generated_element_names =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789!$%&*+-/<=>?@^_~.:;,|";

// Elements are sets of nonterminals; S.T = {A : A -> BC, B in S, C in T}. Only
// the sub-groupoid generated by the letter images is built. The empty set is
// an ordinary, never-accepting element.
inline GroupoidEmbedding cfg_to_groupoid(const Grammar& g, int max_nonterminals = 10) {
  if (g.nonterminal_count() > max_nonterminals)
    throw CapExceeded("cfg_to_groupoid: " + std::to_string(g.nonterminal_count()) +
                      " nonterminals exceed the cap of " + std::to_string(max_nonterminals));
  using Set = std::vector<int>;
  std::map<Set, int> index;
  std::vector<Set> sets;
  auto intern = [&](Set s) {
    auto [it, inserted] = index.try_emplace(s, static_cast<int>(sets.size()));
    if (inserted) sets.push_back(std::move(s));
    return it->second;
  };
  std::vector<int> letter_element;
  for (int a = 0; a < g.terminals().size(); ++a) {
    std::set<int> s;
    for (const auto& r : g.terminal_rules())
      if (r.symbol == a) s.insert(r.lhs);
    letter_element.push_back(intern(Set(s.begin(), s.end())));
  }
  auto mult = [&](const Set& x, const Set& y) {
    std::vector<bool> in_y(static_cast<std::size_t>(g.nonterminal_count()), false);
    for (int c : y) in_y[static_cast<std::size_t>(c)] = true;
    std::set<int> out;
    for (int b : x)
      for (const auto& [a, c] : g.rules_with_left(b))
        if (in_y[static_cast<std::size_t>(c)]) out.insert(a);
    return Set(out.begin(), out.end());
  };
  std::map<std::pair<int, int>, int> products;
  for (std::size_t before = 0; before != sets.size();) {
    before = sets.size();
    for (std::size_t x = 0; x < before; ++x)
      for (std::size_t y = 0; y < before; ++y) {
        auto key = std::make_pair(static_cast<int>(x), static_cast<int>(y));
        if (!products.count(key)) products[key] = intern(mult(sets[x], sets[y]));
      }
    if (sets.size() > generated_element_names.size())
      throw CapExceeded("cfg_to_groupoid: generated groupoid exceeds " +
                        std::to_string(generated_element_names.size()) + " elements");
  }
  const int m = static_cast<int>(sets.size());
  std::vector<int> table(static_cast<std::size_t>(m * m));
  for (const auto& [key, z] : products) table[static_cast<std::size_t>(key.first * m + key.second)] = z;
  std::vector<bool> accepting(static_cast<std::size_t>(m), false);
  for (int x = 0; x < m; ++x)
    for (int a : sets[static_cast<std::size_t>(x)])
      if (a == g.start()) accepting[static_cast<std::size_t>(x)] = true;
  Alphabet names(generated_element_names.substr(0, static_cast<std::size_t>(m)));
  return GroupoidEmbedding{WordProblem(Groupoid(names, std::move(table)), std::move(accepting)),
                           std::move(letter_element), std::move(sets)};
}

// N_g -> N_x N_y whenever x.y = g, N_g -> g, start -> N_s for accepting s.
inline Grammar groupoid_to_cfg(const WordProblem& wp) {
  const Groupoid& g = wp.groupoid();
  GrammarBuilder b{g.elements()};
  b.set_start("S");
  auto nt = [&](int x) { return std::string("N_") + g.elements().symbol(x); };
  for (int x = 0; x < g.size(); ++x) {
    b.add(nt(x), {b.t(g.elements().symbol(x))});
    if (wp.accepting(x)) b.add("S", {b.n(nt(x))});
    for (int y = 0; y < g.size(); ++y) b.add(nt(g.multiply(x, y)), {b.n(nt(x)), b.n(nt(y))});
  }
  return b.build();
}

} // namespace strlogic

#endif // STRLOGIC_GROUPOID_HPP
