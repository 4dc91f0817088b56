#ifndef STRLOGIC_RANK_TYPE_HPP
#define STRLOGIC_RANK_TYPE_HPP

#include <algorithm>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"

namespace strlogic {

// Which constants the structures carry. With Endpoints, min and max are terms
// of the signature (as in the formula language); OrderOnly has only < and the
// letter predicates.
enum class Signature { Endpoints, OrderOnly };

inline const char* to_string(Signature s) { return s == Signature::Endpoints ? "endpoints" : "order"; }

// Hash-consed rank-m types of pebbled words. The type of (u, p_1..p_r) with m
// rounds left is identified by its atomic description (letters at and order
// among the constants and pebbles) together with the set of (m-1)-round types
// of its one-pebble extensions. Two pebbled words get the same id iff the
// duplicator wins the m-round game on them.
class TypeUniverse {
public:
  TypeUniverse(Alphabet alphabet, Signature signature) : alphabet_(std::move(alphabet)), signature_(signature) {}

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  Signature signature() const noexcept { return signature_; }

  int type_of(std::span<const int> word, int rounds) {
    std::lock_guard lock(mutex_);
    std::vector<int> pebbles;
    return compute(word, pebbles, rounds);
  }

  // Type of the word with positions (1-based) already pebbled.
  int type_of(std::span<const int> word, std::span<const int> pebbles, int rounds) {
    std::lock_guard lock(mutex_);
    std::vector<int> p(pebbles.begin(), pebbles.end());
    for (int x : p)
      if (x < 1 || x > static_cast<int>(word.size())) throw InvalidArgument("pebble outside the word");
    return compute(word, p, rounds);
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return index_.size();
  }

private:
  struct KeyHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
      std::size_t h = v.size();
      for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      return h;
    }
  };

  void atomic(std::span<const int> word, const std::vector<int>& pebbles, std::vector<int>& key) const {
    const int n = static_cast<int>(word.size());
    if (n == 0) {
      key.push_back(1);
      return;
    }
    key.push_back(0);
    std::vector<int> terms;
    if (signature_ == Signature::Endpoints) {
      terms.push_back(1);
      terms.push_back(n);
    }
    terms.insert(terms.end(), pebbles.begin(), pebbles.end());
    key.push_back(static_cast<int>(terms.size()));
    for (int t : terms) key.push_back(word[static_cast<std::size_t>(t - 1)]);
    for (std::size_t i = 0; i < terms.size(); ++i)
      for (std::size_t j = i + 1; j < terms.size(); ++j)
        key.push_back(terms[i] < terms[j] ? 0 : terms[i] == terms[j] ? 1 : 2);
  }

  int compute(std::span<const int> word, std::vector<int>& pebbles, int rounds) {
    std::vector<int> key{rounds};
    atomic(word, pebbles, key);
    key.push_back(-1);
    if (rounds > 0) {
      std::vector<int> children;
      for (int p = 1; p <= static_cast<int>(word.size()); ++p) {
        pebbles.push_back(p);
        children.push_back(compute(word, pebbles, rounds - 1));
        pebbles.pop_back();
      }
      std::sort(children.begin(), children.end());
      children.erase(std::unique(children.begin(), children.end()), children.end());
      key.insert(key.end(), children.begin(), children.end());
    }
    return index_.try_emplace(std::move(key), static_cast<int>(index_.size())).first->second;
  }

  Alphabet alphabet_;
  Signature signature_;
  mutable std::mutex mutex_;
  std::unordered_map<std::vector<int>, int, KeyHash> index_;
};

// Shared universes, one per (alphabet, signature), so that type ids are
// comparable across calls.
inline std::shared_ptr<TypeUniverse> type_universe(const Alphabet& sigma, Signature signature) {
  static std::mutex mutex;
  static std::map<std::pair<std::string, Signature>, std::shared_ptr<TypeUniverse>> registry;
  std::lock_guard lock(mutex);
  auto& slot = registry[{std::string(sigma.symbols()), signature}];
  if (!slot) slot = std::make_shared<TypeUniverse>(sigma, signature);
  return slot;
}

struct TypeLimits {
  int max_rank = 3;
  std::size_t budget = 20000; // monoid elements

  static TypeLimits from_environment() {
    TypeLimits out;
    if (const char* b = std::getenv("STRLOGIC_TYPE_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(b, &end, 10);
      if (end != b && *end == '\0' && v > 0) out.budget = static_cast<std::size_t>(v);
    }
    return out;
  }
};

// S^k with its multiplication. Element 0 is the type of the empty word; every
// element stores a shortest word of its type (shortlex-least among those).
struct TypeMonoid {
  Alphabet alphabet;
  int rank = 0;
  Signature signature = Signature::Endpoints;
  std::shared_ptr<TypeUniverse> universe;
  std::vector<int> keys;                  // element -> universe id
  std::vector<Word> representatives;      // element -> shortest word
  std::vector<int> right;                 // [x * |Σ| + a] = x·a
  std::vector<int> left;                  // [a * size + y] = a·y
  std::vector<int> letter_types;          // a -> element

  int size() const noexcept { return static_cast<int>(keys.size()); }
  int unit() const noexcept { return 0; }
  int append(int x, int a) const {
    return right[static_cast<std::size_t>(x) * static_cast<std::size_t>(alphabet.size()) + static_cast<std::size_t>(a)];
  }
  int prepend(int a, int y) const {
    return left[static_cast<std::size_t>(a) * static_cast<std::size_t>(size()) + static_cast<std::size_t>(y)];
  }
  int element_of(std::span<const int> w) const {
    int x = unit();
    for (int a : w) x = append(x, a);
    return x;
  }
  // x·y, folding the representative of y onto x.
  int multiply(int x, int y) const {
    for (int a : representatives[static_cast<std::size_t>(y)].letters()) x = append(x, a);
    return x;
  }
  std::optional<int> find_key(int key) const {
    auto it = by_key.find(key);
    if (it == by_key.end()) return std::nullopt;
    return it->second;
  }

  std::unordered_map<int, int> by_key;
};

inline TypeMonoid build_type_monoid_uncached(const Alphabet& sigma, int k, Signature signature, TypeLimits limits) {
  if (k < 0 || k > limits.max_rank)
    throw CapExceeded("rank " + std::to_string(k) + " exceeds the cap of " + std::to_string(limits.max_rank));
  TypeMonoid m;
  m.alphabet = sigma;
  m.rank = k;
  m.signature = signature;
  m.universe = type_universe(sigma, signature);
  const int s = sigma.size();
  auto add = [&](Word w) {
    const int key = m.universe->type_of(w.letters(), k);
    auto [it, inserted] = m.by_key.try_emplace(key, m.size());
    if (inserted) {
      if (m.keys.size() >= limits.budget)
        throw CapExceeded("type monoid for rank " + std::to_string(k) + " over " + sigma.to_string() +
                          " exceeds the budget of " + std::to_string(limits.budget) + " elements");
      m.keys.push_back(key);
      m.representatives.push_back(std::move(w));
    }
    return it->second;
  };
  add(Word(sigma, {}));
  // BFS over right extensions; types are a right congruence, so x·a is the type
  // of rep(x)·a and BFS order yields shortlex-least representatives.
  for (std::size_t x = 0; x < m.keys.size(); ++x)
    for (int a = 0; a < s; ++a) {
      std::vector<int> letters(m.representatives[x].letters().begin(), m.representatives[x].letters().end());
      letters.push_back(a);
      m.right.push_back(add(Word(sigma, std::move(letters))));
    }
  for (int a = 0; a < s; ++a) m.letter_types.push_back(m.append(m.unit(), a));
  m.left.resize(static_cast<std::size_t>(s) * m.keys.size());
  for (int a = 0; a < s; ++a)
    for (int y = 0; y < m.size(); ++y)
      m.left[static_cast<std::size_t>(a) * m.keys.size() + static_cast<std::size_t>(y)] =
          m.multiply(m.letter_types[static_cast<std::size_t>(a)], y);
  return m;
}

// Cached per (alphabet, rank, signature).
inline std::shared_ptr<const TypeMonoid> build_type_monoid(const Alphabet& sigma, int k,
                                                           Signature signature = Signature::Endpoints,
                                                           TypeLimits limits = TypeLimits::from_environment()) {
  static std::mutex mutex;
  static std::map<std::tuple<std::string, int, Signature>, std::shared_ptr<const TypeMonoid>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(std::string(sigma.symbols()), k, signature);
  if (auto it = cache.find(key); it != cache.end()) {
    if (it->second->keys.size() > limits.budget)
      throw CapExceeded("cached type monoid exceeds the budget of " + std::to_string(limits.budget) + " elements");
    return it->second;
  }
  auto m = std::make_shared<const TypeMonoid>(build_type_monoid_uncached(sigma, k, signature, limits));
  cache.emplace(key, m);
  return m;
}

struct RankType {
  int rank = 0;
  int key = 0; // universe id; equal keys iff rank-k equivalent (same alphabet and signature)
  Word representative;

  friend bool operator==(const RankType& a, const RankType& b) noexcept { return a.rank == b.rank && a.key == b.key; }
};

// The key alone, computed directly from the game characterization.
inline int type_key(const Word& w, int k, Signature signature = Signature::Endpoints, int max_rank = 3) {
  if (k < 0 || k > max_rank)
    throw CapExceeded("rank " + std::to_string(k) + " exceeds the cap of " + std::to_string(max_rank));
  return type_universe(w.alphabet(), signature)->type_of(w.letters(), k);
}

// Key plus the shortest representative, which needs the type monoid.
inline RankType rank_type(const Word& w, int k, Signature signature = Signature::Endpoints) {
  const int key = type_key(w, k, signature);
  auto m = build_type_monoid(w.alphabet(), k, signature);
  auto x = m->find_key(key);
  if (!x) throw Error("word type missing from the type monoid");
  return RankType{k, key, m->representatives[static_cast<std::size_t>(*x)]};
}

} // namespace strlogic

#endif // STRLOGIC_RANK_TYPE_HPP
