#ifndef STRLOGIC_ORACLES_HPP
#define STRLOGIC_ORACLES_HPP

// Slow, independent reference procedures used by the tests and by the
// self-test. Not part of the library umbrella header.

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "alphabet.hpp"
#include "automata.hpp"
#include "grammar.hpp"
#include "groupoid.hpp"
#include "rank_type.hpp"

namespace strlogic::oracle {

// ---------------------------------------------------------------------------
// Ehrenfeucht–Fraïssé games
// ---------------------------------------------------------------------------

namespace detail {

struct Game {
  std::span<const int> u, v;
  bool endpoints;

  // Distinguished elements (0-based positions): min, max if endpoints, then pebbles.
  bool partial_isomorphism(const std::vector<int>& a, const std::vector<int>& b) const {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (u[static_cast<std::size_t>(a[i])] != v[static_cast<std::size_t>(b[i])]) return false;
      for (std::size_t j = 0; j < a.size(); ++j) {
        if ((a[i] < a[j]) != (b[i] < b[j])) return false;
        if ((a[i] == a[j]) != (b[i] == b[j])) return false;
      }
    }
    return true;
  }

  // Duplicator wins the remaining `rounds` from this position.
  bool duplicator_wins(std::vector<int>& a, std::vector<int>& b, int rounds) const {
    if (!partial_isomorphism(a, b)) return false;
    if (rounds == 0) return true;
    for (int side = 0; side < 2; ++side) {
      const int n_spoiler = static_cast<int>(side == 0 ? u.size() : v.size());
      const int n_dup = static_cast<int>(side == 0 ? v.size() : u.size());
      auto& sp = side == 0 ? a : b;
      auto& du = side == 0 ? b : a;
      for (int p = 0; p < n_spoiler; ++p) {
        sp.push_back(p);
        bool answered = false;
        for (int q = 0; q < n_dup && !answered; ++q) {
          du.push_back(q);
          answered = duplicator_wins(a, b, rounds - 1);
          du.pop_back();
        }
        sp.pop_back();
        if (!answered) return false;
      }
    }
    return true;
  }
};

} // namespace detail

// u ≡_k v in the k-round game on (positions, <, letters) plus min/max when
// the signature has endpoints. Words must be nonempty.
inline bool ef_equivalent(const Word& u, const Word& v, int k, Signature signature = Signature::Endpoints) {
  if (u.empty() || v.empty()) throw InvalidArgument("EF games need nonempty words");
  detail::Game g{u.letters(), v.letters(), signature == Signature::Endpoints};
  std::vector<int> a, b;
  if (g.endpoints) {
    a = {0, u.length() - 1};
    b = {0, v.length() - 1};
  }
  return g.duplicator_wins(a, b, k);
}

// ---------------------------------------------------------------------------
// Groupoid products by explicit bracketing
// ---------------------------------------------------------------------------

struct Tree {
  std::shared_ptr<const Tree> left, right; // both null for a leaf
};

// Every full binary tree with n leaves (Catalan(n-1) of them).
inline std::vector<std::shared_ptr<const Tree>> bracketings(int n) {
  static std::vector<std::vector<std::shared_ptr<const Tree>>> memo{{}, {std::make_shared<const Tree>()}};
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  while (static_cast<int>(memo.size()) <= n) {
    const int m = static_cast<int>(memo.size());
    std::vector<std::shared_ptr<const Tree>> out;
    for (int i = 1; i < m; ++i)
      for (const auto& l : memo[static_cast<std::size_t>(i)])
        for (const auto& r : memo[static_cast<std::size_t>(m - i)])
          out.push_back(std::make_shared<const Tree>(Tree{l, r}));
    memo.push_back(std::move(out));
  }
  return memo[static_cast<std::size_t>(n)];
}

inline int evaluate_tree(const Groupoid& g, const Tree& t, std::span<const int> w, std::size_t& pos) {
  if (!t.left) return w[pos++];
  const int x = evaluate_tree(g, *t.left, w, pos);
  const int y = evaluate_tree(g, *t.right, w, pos);
  return g.multiply(x, y);
}

inline std::set<int> bracketing_products(const Groupoid& g, std::span<const int> w) {
  std::set<int> out;
  if (w.empty()) return out;
  for (const auto& t : bracketings(static_cast<int>(w.size()))) {
    std::size_t pos = 0;
    out.insert(evaluate_tree(g, *t, w, pos));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Languages
// ---------------------------------------------------------------------------

// Dyck membership by repeatedly cancelling adjacent matched pairs.
inline bool dyck_by_cancellation(std::string s, std::string_view brackets = "()[]{}<>") {
  if (s.empty()) return false;
  for (bool changed = true; changed && !s.empty();) {
    changed = false;
    for (std::size_t i = 0; i + 1 < brackets.size(); i += 2) {
      const std::string pair{brackets[i], brackets[i + 1]};
      for (auto p = s.find(pair); p != std::string::npos; p = s.find(pair)) {
        s.erase(p, 2);
        changed = true;
      }
    }
  }
  return s.empty();
}

// All words of length <= n derived from the start symbol of a CNF grammar,
// by fixpoint over concatenations.
inline std::set<std::string> cnf_language_upto(const Grammar& g, int n) {
  std::vector<std::set<std::string>> words(static_cast<std::size_t>(g.nonterminal_count()));
  for (const auto& r : g.terminal_rules())
    words[static_cast<std::size_t>(r.lhs)].insert(std::string(1, g.terminals().symbol(r.symbol)));
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : g.binary_rules()) {
      std::vector<std::string> fresh;
      for (const auto& x : words[static_cast<std::size_t>(r.left)])
        for (const auto& y : words[static_cast<std::size_t>(r.right)])
          if (static_cast<int>(x.size() + y.size()) <= n && !words[static_cast<std::size_t>(r.lhs)].count(x + y))
            fresh.push_back(x + y);
      for (auto& f : fresh) changed = words[static_cast<std::size_t>(r.lhs)].insert(std::move(f)).second || changed;
    }
  }
  return words[static_cast<std::size_t>(g.start())];
}

// ---------------------------------------------------------------------------
// (l,m)-bounded strings by backtracking
// ---------------------------------------------------------------------------

inline bool lm_bounded_backtrack(std::string_view w, int l, int m) {
  if (w.empty()) return true;
  if (l == 0) return false;
  for (int p = 1; p <= m && p <= static_cast<int>(w.size()); ++p) {
    const std::string_view unit = w.substr(0, static_cast<std::size_t>(p));
    for (std::size_t end = static_cast<std::size_t>(p); end <= w.size(); end += static_cast<std::size_t>(p)) {
      if (w.substr(end - static_cast<std::size_t>(p), static_cast<std::size_t>(p)) != unit) break;
      if (lm_bounded_backtrack(w.substr(end), l - 1, m)) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Automata
// ---------------------------------------------------------------------------

// Every DFA with `states` states over `letters` letters (all initial states,
// all final sets, all transition tables).
template <class Fn>
void for_each_dfa(const Alphabet& sigma, int states, Fn&& fn) {
  const int letters = sigma.size();
  const int cells = states * letters;
  std::vector<int> delta(static_cast<std::size_t>(cells), 0);
  while (true) {
    for (int init = 0; init < states; ++init)
      for (int mask = 0; mask < (1 << states); ++mask) {
        std::vector<bool> final(static_cast<std::size_t>(states));
        for (int q = 0; q < states; ++q) final[static_cast<std::size_t>(q)] = (mask >> q) & 1;
        fn(Dfa(sigma, delta, init, final));
      }
    int i = 0;
    while (i < cells && delta[static_cast<std::size_t>(i)] == states - 1) delta[static_cast<std::size_t>(i++)] = 0;
    if (i == cells) break;
    ++delta[static_cast<std::size_t>(i)];
  }
}

} // namespace strlogic::oracle

#endif // STRLOGIC_ORACLES_HPP
