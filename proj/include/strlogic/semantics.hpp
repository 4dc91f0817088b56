#ifndef STRLOGIC_SEMANTICS_HPP
#define STRLOGIC_SEMANTICS_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"
#include "formula.hpp"
#include "languages.hpp"

namespace strlogic {

using Assignment = std::map<std::string, int>;

struct EvalOptions {
  bool check_complements = false; // cross-check bundled complement grammars on every membership query
};

// The transformation defined by s-1 bodies over the k-tuple `vars`: the image of
// w has length n^k and its ith letter is target[j] for the first body j true at
// the ith tuple in lexical order, or the last letter of target if none is.
struct TransformSpec {
  std::vector<Formula> bodies;
  std::vector<std::string> vars;
  Alphabet target;
};

namespace detail {

class Evaluator {
public:
  Evaluator(const Word& w, EvalOptions opts) : w_(w), n_(w.length()), opts_(opts) {
    if (n_ == 0) throw InvalidArgument("formulas are evaluated on nonempty words");
  }

  void bind(const std::string& name, int position) { env_.emplace_back(&name, position); }
  void unbind() { env_.pop_back(); }

  bool eval(const Formula& f) {
    return std::visit([&](const auto& x) { return eval_node(x); }, f.node().v);
  }

  // Index of the first true body, or bodies.size() (the default letter).
  int select(const std::vector<Formula>& bodies) {
    for (std::size_t j = 0; j < bodies.size(); ++j)
      if (eval(bodies[j])) return static_cast<int>(j);
    return static_cast<int>(bodies.size());
  }

  std::vector<int> sweep(const std::vector<std::string>& vars, const std::vector<Formula>& bodies) {
    const std::size_t k = vars.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if (total > (std::size_t{1} << 28) / static_cast<std::size_t>(n_))
        throw CapExceeded("transformation image longer than 2^28 letters");
      total *= static_cast<std::size_t>(n_);
    }
    std::vector<int> out;
    out.reserve(total);
    std::vector<int> tuple(k, 1);
    for (std::size_t i = 0; i < k; ++i) bind(vars[i], 1);
    const std::size_t base = env_.size() - k;
    while (true) {
      for (std::size_t i = 0; i < k; ++i) env_[base + i].second = tuple[i];
      out.push_back(select(bodies));
      std::size_t i = k;
      while (i > 0 && tuple[i - 1] == n_) tuple[--i] = 1;
      if (i == 0) break;
      ++tuple[i - 1];
    }
    for (std::size_t i = 0; i < k; ++i) unbind();
    return out;
  }

private:
  int value(const Term& t) const {
    switch (t.kind) {
    case Term::Kind::Min: return 1;
    case Term::Kind::Max: return n_;
    case Term::Kind::Var: break;
    }
    for (auto it = env_.rbegin(); it != env_.rend(); ++it)
      if (*it->first == t.name) return it->second;
    throw InvalidArgument("unassigned free variable '" + t.name + "'");
  }

  bool eval_node(const node::Const& x) { return x.value; }
  bool eval_node(const node::Letter& x) { return w_.symbol_at(value(x.term)) == x.symbol; }
  bool eval_node(const node::Eq& x) { return value(x.lhs) == value(x.rhs); }
  bool eval_node(const node::Lt& x) { return value(x.lhs) < value(x.rhs); }
  bool eval_node(const node::Bit& x) {
    const int i = value(x.index);
    return i <= 31 && ((value(x.number) >> (i - 1)) & 1) != 0;
  }
  bool eval_node(const node::Plus& x) { return value(x.lhs) + value(x.rhs) == value(x.sum); }
  bool eval_node(const node::Not& x) { return !eval(x.child); }
  bool eval_node(const node::And& x) {
    for (const auto& c : x.children)
      if (!eval(c)) return false;
    return true;
  }
  bool eval_node(const node::Or& x) {
    for (const auto& c : x.children)
      if (eval(c)) return true;
    return false;
  }
  bool eval_node(const node::Exists& x) {
    bind(x.var, 0);
    bool found = false;
    for (int p = 1; p <= n_ && !found; ++p) {
      env_.back().second = p;
      found = eval(x.body);
    }
    unbind();
    return found;
  }
  bool eval_node(const node::Forall& x) {
    bind(x.var, 0);
    bool all = true;
    for (int p = 1; p <= n_ && all; ++p) {
      env_.back().second = p;
      all = eval(x.body);
    }
    unbind();
    return all;
  }
  bool eval_node(const node::Lindstrom& x) {
    Word image(x.language.alphabet(), sweep(x.vars, x.bodies));
    return language_member(x.language, image, opts_.check_complements);
  }

  const Word& w_;
  int n_;
  EvalOptions opts_;
  std::vector<std::pair<const std::string*, int>> env_;
};

inline void check_assignment(const Formula& f, const Word& w, const Assignment& a,
                             const std::vector<std::string>& extra = {}) {
  if (w.empty()) throw InvalidArgument("formulas are evaluated on nonempty words");
  for (const auto& v : free_vars(f)) {
    if (std::find(extra.begin(), extra.end(), v) != extra.end()) continue;
    auto it = a.find(v);
    if (it == a.end()) throw InvalidArgument("unassigned free variable '" + v + "'");
    if (it->second < 1 || it->second > w.length())
      throw InvalidArgument("variable '" + v + "' = " + std::to_string(it->second) + " is not a position of a word of length " +
                            std::to_string(w.length()));
  }
}

inline void bind_all(Evaluator& e, const Assignment& a) {
  for (const auto& [name, pos] : a) e.bind(name, pos);
}

} // namespace detail

inline bool eval(const Formula& f, const Word& w, const Assignment& a = {}, EvalOptions opts = {}) {
  detail::check_assignment(f, w, a);
  detail::Evaluator e(w, opts);
  detail::bind_all(e, a);
  return e.eval(f);
}

inline void validate(const TransformSpec& spec) {
  if (spec.vars.empty()) throw InvalidArgument("a transformation needs at least one variable");
  if (static_cast<int>(spec.bodies.size()) != spec.target.size() - 1)
    throw InvalidArgument("a transformation onto " + spec.target.to_string() + " needs " +
                          std::to_string(spec.target.size() - 1) + " bodies, got " + std::to_string(spec.bodies.size()));
}

inline Word transform(const TransformSpec& spec, const Word& w, const Assignment& outer = {}, EvalOptions opts = {}) {
  validate(spec);
  for (const auto& b : spec.bodies) detail::check_assignment(b, w, outer, spec.vars);
  detail::Evaluator e(w, opts);
  detail::bind_all(e, outer);
  return Word(spec.target, e.sweep(spec.vars, spec.bodies));
}

// Letter chosen by the cascade at the given assignment: the index of the first
// true body, or bodies.size() when none holds.
inline int select_letter(const std::vector<Formula>& bodies, const Word& w, const Assignment& a, EvalOptions opts = {}) {
  for (const auto& b : bodies) detail::check_assignment(b, w, a);
  detail::Evaluator e(w, opts);
  detail::bind_all(e, a);
  return e.select(bodies);
}

} // namespace strlogic

#endif // STRLOGIC_SEMANTICS_HPP
