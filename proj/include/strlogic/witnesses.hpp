#ifndef STRLOGIC_WITNESSES_HPP
#define STRLOGIC_WITNESSES_HPP

#include <algorithm>
#include <climits>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"
#include "formula.hpp"
#include "grammar.hpp"
#include "parser.hpp"
#include "semantics.hpp"

namespace strlogic {

// ---------------------------------------------------------------------------
// (l,m)-bounded strings
// ---------------------------------------------------------------------------

struct Factorization {
  struct Block {
    std::string unit;
    int count = 0;
  };
  std::vector<Block> blocks;
  int l = 0, m = 0;

  std::string expand() const {
    std::string out;
    for (const auto& b : blocks)
      for (int i = 0; i < b.count; ++i) out += b.unit;
    return out;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& b : blocks) {
      if (!out.empty()) out += ' ';
      out += (b.unit.size() == 1 ? b.unit : "(" + b.unit + ")") + "^" + std::to_string(b.count);
    }
    return out.empty() ? "ε" : out;
  }
};

namespace detail {

// Shortest factorization into blocks u^r with 1 <= |u| <= m (shortest path over
// block end points). prev[j] = (start, unit length) of the last block.
inline std::pair<std::vector<int>, std::vector<std::pair<int, int>>> block_paths(std::string_view w, int m) {
  const int n = static_cast<int>(w.size());
  std::vector<int> best(static_cast<std::size_t>(n + 1), INT_MAX);
  std::vector<std::pair<int, int>> prev(static_cast<std::size_t>(n + 1), {-1, 0});
  best[0] = 0;
  for (int i = 0; i < n; ++i) {
    if (best[static_cast<std::size_t>(i)] == INT_MAX) continue;
    const int cand = best[static_cast<std::size_t>(i)] + 1;
    for (int p = 1; p <= m && i + p <= n; ++p) {
      for (int j = i + p; j <= n; j += p) {
        if (j > i + p && w.compare(static_cast<std::size_t>(j - p), static_cast<std::size_t>(p), w,
                                   static_cast<std::size_t>(i), static_cast<std::size_t>(p)) != 0)
          break;
        if (cand < best[static_cast<std::size_t>(j)]) {
          best[static_cast<std::size_t>(j)] = cand;
          prev[static_cast<std::size_t>(j)] = {i, p};
        }
      }
    }
  }
  return {std::move(best), std::move(prev)};
}

} // namespace detail

// Least l such that w is (l,m)-bounded.
inline int min_blocks(std::string_view w, int m) {
  if (m < 1) throw InvalidArgument("unit length bound m must be positive");
  return detail::block_paths(w, m).first.back();
}

// A factorization of w into at most l blocks u_i^{r_i} with |u_i| <= m, if any.
inline std::optional<Factorization> lm_bounded(std::string_view w, int l, int m) {
  if (m < 1 || l < 0) throw InvalidArgument("bounds must satisfy l >= 0, m >= 1");
  auto [best, prev] = detail::block_paths(w, m);
  if (best.back() > l) return std::nullopt;
  Factorization f;
  f.l = l;
  f.m = m;
  for (int j = static_cast<int>(w.size()); j > 0;) {
    auto [i, p] = prev[static_cast<std::size_t>(j)];
    f.blocks.push_back({std::string(w.substr(static_cast<std::size_t>(i), static_cast<std::size_t>(p))), (j - i) / p});
    j = i;
  }
  std::reverse(f.blocks.begin(), f.blocks.end());
  return f;
}

enum class BitOp { Not, And, Or };

inline std::string bitwise(std::string_view u, std::string_view w, BitOp op) {
  auto bit = [](char c) {
    if (c != '0' && c != '1') throw InvalidArgument("bitwise operations need 0-1 strings");
    return c == '1';
  };
  if (op != BitOp::Not && u.size() != w.size()) throw InvalidArgument("bitwise operands differ in length");
  std::string out(u.size(), '0');
  for (std::size_t i = 0; i < u.size(); ++i) {
    bool r = op == BitOp::Not ? !bit(u[i]) : op == BitOp::And ? (bit(u[i]) && bit(w[i])) : (bit(u[i]) || bit(w[i]));
    out[i] = r ? '1' : '0';
  }
  return out;
}

inline std::string bitwise_not(std::string_view u) { return bitwise(u, u, BitOp::Not); }

// u (l,m)-bounded and w (l2,m2)-bounded: And/Or must be (5(l+l2), m·m2)-bounded.
inline bool check_lemma_lm(std::string_view u, int l, int m, std::string_view w, int l2, int m2) {
  if (!lm_bounded(u, l, m)) throw InvalidArgument("first string is not (l,m)-bounded");
  if (!lm_bounded(w, l2, m2)) throw InvalidArgument("second string is not (l',m')-bounded");
  const int lb = 5 * (l + l2), mb = m * m2;
  return lm_bounded(bitwise(u, w, BitOp::And), lb, mb).has_value() &&
         lm_bounded(bitwise(u, w, BitOp::Or), lb, mb).has_value();
}

struct LemmaSweep {
  long pairs = 0;       // (u, w) pairs examined
  long instances = 0;   // (u, w, l, l', m, m') combinations where the premise held
  long failures = 0;
  long complement_failures = 0;
  std::string first_failure;
};

// All u, w of equal length <= max_len and all l, l', m, m' <= bound.
inline LemmaSweep lemma_lm_exhaustive(int max_len, int bound) {
  LemmaSweep out;
  for (int n = 1; n <= max_len; ++n) {
    const std::uint32_t count = std::uint32_t{1} << n;
    std::vector<std::string> words(count);
    for (std::uint32_t x = 0; x < count; ++x) {
      std::string s(static_cast<std::size_t>(n), '0');
      for (int i = 0; i < n; ++i)
        if ((x >> (n - 1 - i)) & 1u) s[static_cast<std::size_t>(i)] = '1';
      words[x] = std::move(s);
    }
    const int max_m = bound * bound;
    std::vector<std::vector<int>> mb(static_cast<std::size_t>(max_m + 1), std::vector<int>(count));
    for (int m = 1; m <= max_m; ++m)
      for (std::uint32_t x = 0; x < count; ++x) mb[static_cast<std::size_t>(m)][x] = min_blocks(words[x], m);
    const std::uint32_t mask = count - 1;
    for (std::uint32_t u = 0; u < count; ++u) {
      for (int m = 1; m <= bound; ++m) {
        const int lu = mb[static_cast<std::size_t>(m)][u];
        if (lu <= bound && mb[static_cast<std::size_t>(m)][~u & mask] > lu) {
          ++out.complement_failures;
          if (out.first_failure.empty()) out.first_failure = "complement of " + words[u];
        }
      }
      for (std::uint32_t w = 0; w < count; ++w) {
        ++out.pairs;
        for (int m = 1; m <= bound; ++m)
          for (int m2 = 1; m2 <= bound; ++m2) {
            const int lu = mb[static_cast<std::size_t>(m)][u], lw = mb[static_cast<std::size_t>(m2)][w];
            for (int l = std::max(lu, 0); l <= bound; ++l)
              for (int l2 = std::max(lw, 0); l2 <= bound; ++l2) {
                ++out.instances;
                const int lim = 5 * (l + l2);
                const auto& row = mb[static_cast<std::size_t>(m * m2)];
                if (row[u & w] > lim || row[u | w] > lim) {
                  ++out.failures;
                  if (out.first_failure.empty()) out.first_failure = words[u] + " / " + words[w];
                }
              }
          }
      }
    }
  }
  return out;
}

// A uniformly chosen block structure with at most l blocks, units of length
// <= m, and total length exactly n (n >= 1).
inline std::string random_bounded_string(std::mt19937_64& rng, int n, int l, int m) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto unit = [&](int len) {
    std::string u(static_cast<std::size_t>(len), '0');
    for (auto& c : u) c = pick(0, 1) ? '1' : '0';
    return u;
  };
  std::string out;
  int remaining = n;
  const int blocks = pick(1, l);
  for (int b = 1; b < blocks && remaining > 1; ++b) {
    const int len = pick(1, std::min(m, remaining - 1));
    const int reps = pick(1, std::max(1, (remaining - 1) / len / 2));
    std::string u = unit(len);
    for (int r = 0; r < reps; ++r) out += u;
    remaining -= len * reps;
  }
  int len = std::min(m, remaining);
  while (remaining % len != 0) --len;
  std::string u = unit(len);
  for (int r = 0; r < remaining / len; ++r) out += u;
  return out;
}

struct LemmaRandom {
  long samples = 0;
  long failures = 0;
  std::string first_failure;
};

inline LemmaRandom lemma_lm_random(int samples, int max_len, int bound, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  LemmaRandom out;
  for (int s = 0; s < samples; ++s) {
    const int n = pick(1, max_len);
    const int l = pick(1, bound), l2 = pick(1, bound), m = pick(1, bound), m2 = pick(1, bound);
    const std::string u = random_bounded_string(rng, n, l, m);
    const std::string w = random_bounded_string(rng, n, l2, m2);
    ++out.samples;
    if (!check_lemma_lm(u, l, m, w, l2, m2) || !lm_bounded(bitwise_not(u), l, m)) {
      ++out.failures;
      if (out.first_failure.empty()) out.first_failure = u + " / " + w;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// t_φ over unary words
// ---------------------------------------------------------------------------

namespace detail {

inline void require_unary_arithmetic(const Formula& f) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Letter> || std::is_same_v<T, node::Bit> ||
                      std::is_same_v<T, node::Lindstrom>)
          throw InvalidArgument("t_phi formulas use only order, equality, PLUS and constants");
        else if constexpr (std::is_same_v<T, node::Not>) require_unary_arithmetic(x.child);
        else if constexpr (std::is_same_v<T, node::And> || std::is_same_v<T, node::Or>) {
          for (const auto& c : x.children) require_unary_arithmetic(c);
        } else if constexpr (std::is_same_v<T, node::Exists> || std::is_same_v<T, node::Forall>)
          require_unary_arithmetic(x.body);
      },
      f.node().v);
}

} // namespace detail

// v_i = 1 iff <0^n, i, ȳ> ⊨ φ(x, ȳ).
inline std::string t_phi(const Formula& phi, const std::string& x, const Assignment& ybar, int n) {
  detail::require_unary_arithmetic(phi);
  if (n < 1) throw InvalidArgument("t_phi needs n >= 1");
  const Word zeros(Alphabet("0"), std::vector<int>(static_cast<std::size_t>(n), 0));
  Assignment a = ybar;
  std::string out;
  for (int i = 1; i <= n; ++i) {
    a[x] = i;
    out += eval(phi, zeros, a) ? '1' : '0';
  }
  return out;
}

// Calls fn(n, ȳ, t_φ) for every n in [1, n_max] and ȳ in [1, n]^|params|.
template <class Fn>
void for_each_tphi(const Formula& phi, const std::string& x, const std::vector<std::string>& params, int n_max, Fn&& fn) {
  for (int n = 1; n <= n_max; ++n) {
    std::vector<int> ys(params.size(), 1);
    while (true) {
      Assignment a;
      for (std::size_t i = 0; i < params.size(); ++i) a[params[i]] = ys[i];
      fn(n, a, t_phi(phi, x, a, n));
      std::size_t i = ys.size();
      while (i > 0 && ys[i - 1] == n) ys[--i] = 1;
      if (i == 0) break;
      ++ys[i - 1];
    }
  }
}

inline bool check_tphi_bounded(const Formula& phi, const std::string& x, const std::vector<std::string>& params,
                               int n_max, int l, int m) {
  bool ok = true;
  for_each_tphi(phi, x, params, n_max, [&](int, const Assignment&, const std::string& t) {
    ok = ok && lm_bounded(t, l, m).has_value();
  });
  return ok;
}

struct LmProfile {
  std::vector<int> blocks_needed; // index m-1: worst-case least l for unit bound m
  std::optional<std::pair<int, int>> minimal; // (l, m) with l <= l_max and least l + m, then least m
};

// Worst case over n <= n_max and all ȳ, for each m <= m_max.
inline LmProfile minimal_lm(const Formula& phi, const std::string& x, const std::vector<std::string>& params,
                            int n_max, int l_max = 12, int m_max = 8) {
  LmProfile out;
  out.blocks_needed.assign(static_cast<std::size_t>(m_max), 0);
  for_each_tphi(phi, x, params, n_max, [&](int, const Assignment&, const std::string& t) {
    for (int m = 1; m <= m_max; ++m) {
      int& slot = out.blocks_needed[static_cast<std::size_t>(m - 1)];
      slot = std::max(slot, min_blocks(t, m));
    }
  });
  for (int m = 1; m <= m_max; ++m) {
    const int l = out.blocks_needed[static_cast<std::size_t>(m - 1)];
    if (l <= l_max && (!out.minimal || l + m < out.minimal->first + out.minimal->second))
      out.minimal = std::make_pair(l, m);
  }
  return out;
}

struct ArithmeticCorpusEntry {
  std::string name;
  std::string text; // formula over the unary alphabet (0)
  std::string x;
  std::vector<std::string> params;
};

// FO(+) formulas of rank <= 2 with at most two parameters.
inline std::vector<ArithmeticCorpusEntry> arithmetic_corpus() {
  return {
      {"even", "E z. z + z = x", "x", {}},
      {"odd", "~E z. z + z = x", "x", {}},
      {"first", "x = min", "x", {}},
      {"last", "x = max", "x", {}},
      {"lower-half", "E z. x + x = z", "x", {}},
      {"multiple-of-3", "E z. E u. (z + z = u & u + z = x)", "x", {}},
      {"shift", "x + y = w", "x", {"y", "w"}},
      {"interval", "y < x & x <= w", "x", {"y", "w"}},
      {"outside", "x < y | w < x", "x", {"y", "w"}},
      {"distance-even", "E z. E u. (x + z = u & u + z = y)", "x", {"y"}},
      {"halfway", "E z. (x + x = z & y <= z)", "x", {"y"}},
      {"bounded-gap", "A z. (z + y = x -> z < w)", "x", {"y", "w"}},
      {"sum-parity", "E z. E u. (z + z = u & x + y = u)", "x", {"y"}},
  };
}

// ---------------------------------------------------------------------------
// {0^{n^2}} against unary context-free length sets
// ---------------------------------------------------------------------------

struct UnaryCorpusEntry {
  std::string name;
  Grammar grammar;
};

inline std::vector<UnaryCorpusEntry> unary_cfg_corpus() {
  auto g = [](const char* text) { return parse_grammar(text); };
  return {
      {"all", g("S -> '0' | '0' S")},
      {"even", g("S -> '0' '0' | '0' '0' S")},
      {"odd-nested", g("S -> '0' | '0' S '0'")},
      {"multiples-of-3", g("S -> '0' '0' '0' | '0' '0' '0' S")},
      {"at-least-5", g("S -> '0' '0' '0' '0' '0' T\nT -> '' | '0' T")},
      {"two-mod-3", g("S -> '0' '0' | S '0' '0' '0'")},
      {"one-mod-3-nested", g("S -> '0' | '0' S '0' '0'")},
      {"finite", g("S -> '0' | '0' '0' '0' | '0' '0' '0' '0'")},
      {"twos-or-threes", g("S -> A | B\nA -> '0' '0' | '0' '0' A\nB -> '0' '0' '0' | '0' '0' '0' B")},
      {"odd-plus-odd", g("S -> A A\nA -> '0' | '0' '0' A")},
      {"dyck-shadow", g("S -> '0' S '0' | S S | '0' '0'")},
      {"seven-plus-fives", g("S -> '0' '0' '0' '0' '0' '0' '0' | S '0' '0' '0' '0' '0'")},
  };
}

struct SquaresReport {
  int max_n = 0;
  std::set<int> squares;
  std::optional<LinearSetUnion> squares_fit;
  struct Entry {
    std::string name;
    std::set<int> lengths;
    std::optional<LinearSetUnion> fit;
  };
  std::vector<Entry> corpus;

  bool separates() const {
    return !squares_fit && std::all_of(corpus.begin(), corpus.end(), [](const Entry& e) { return e.fit.has_value(); });
  }
};

inline SquaresReport squares_witness_report(int max_n, const std::vector<UnaryCorpusEntry>& corpus) {
  SquaresReport r;
  r.max_n = max_n;
  for (int i = 1; i * i <= max_n; ++i) r.squares.insert(i * i);
  r.squares_fit = semilinear_fit(r.squares, max_n);
  for (const auto& e : corpus) {
    auto lengths = length_set(e.grammar, max_n);
    auto fit = semilinear_fit(lengths, max_n);
    r.corpus.push_back({e.name, std::move(lengths), std::move(fit)});
  }
  return r;
}

inline SquaresReport squares_witness_report(int max_n) { return squares_witness_report(max_n, unary_cfg_corpus()); }

// ---------------------------------------------------------------------------
// ww and its complement
// ---------------------------------------------------------------------------

// Nonempty words over (a,b) not of the form ww: odd length, or xy with
// |x| = |y| differing at some position i, which splits as two odd-length words
// centred on the differing letters.
inline Grammar ww_complement_grammar() {
  return parse_grammar(R"(terminals: a b
start: C
C -> O | A B | B A
O -> X | X X O
A -> 'a' | X A X
B -> 'b' | X B X
X -> 'a' | 'b'
)");
}

inline bool is_ww(const Word& w) {
  const int n = w.length();
  if (n == 0 || n % 2 != 0) return false;
  auto l = w.letters();
  return std::equal(l.begin(), l.begin() + n / 2, l.begin() + n / 2);
}

inline std::pair<bool, bool> ww_witness(const Word& w) {
  static const Grammar co = ww_complement_grammar();
  return {is_ww(w), cyk_member(co, w)};
}

} // namespace strlogic

#endif // STRLOGIC_WITNESSES_HPP
