#ifndef STRLOGIC_FORMULA_HPP
#define STRLOGIC_FORMULA_HPP

#include <algorithm>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"

namespace strlogic {

class Grammar;
class WordProblem;

// ---------------------------------------------------------------------------
// Language references used by Lindström quantifiers
// ---------------------------------------------------------------------------

enum class NamedLanguage {
  Majority,       // over (1,0): more 1s than 0s
  Dyck,           // one-sided Dyck language over t bracket pairs
  EqualZeroOne,   // over (0,1,#): |w|_0 = |w|_1
  AdditionHelper, // over (a,b,c,0,1): 0^{i-1} a 1* b 0^{i-1} c 1*
};

struct GrammarLanguage {
  std::shared_ptr<const Grammar> grammar;
  std::shared_ptr<const Grammar> complement; // may be null
};

struct GroupoidLanguage {
  std::shared_ptr<const WordProblem> problem;
};

struct NamedLanguageRef {
  NamedLanguage kind;
  int dyck_types = 0;
};

class LanguageRef {
public:
  using Variant = std::variant<GrammarLanguage, GroupoidLanguage, NamedLanguageRef>;

  LanguageRef(std::string name, Alphabet alphabet, Variant target)
      : name_(std::move(name)), alphabet_(std::move(alphabet)), target_(std::move(target)) {}

  static LanguageRef named(NamedLanguage kind, int dyck_types = 0) {
    switch (kind) {
    case NamedLanguage::Majority:
      return LanguageRef("Maj", Alphabet("10"), NamedLanguageRef{kind, 0});
    case NamedLanguage::EqualZeroOne:
      return LanguageRef("EqualZeroOne", Alphabet("01#"), NamedLanguageRef{kind, 0});
    case NamedLanguage::AdditionHelper:
      return LanguageRef("Add", Alphabet("abc01"), NamedLanguageRef{kind, 0});
    case NamedLanguage::Dyck:
      if (dyck_types < 1 || dyck_types > 4) throw InvalidArgument("Dyck(t) supports 1 <= t <= 4");
      return LanguageRef("Dyck" + std::to_string(dyck_types),
                         Alphabet(std::string_view("()[]{}<>").substr(0, static_cast<std::size_t>(2 * dyck_types))),
                         NamedLanguageRef{kind, dyck_types});
    }
    throw InvalidArgument("unknown named language");
  }

  const std::string& name() const noexcept { return name_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const Variant& target() const noexcept { return target_; }

  friend bool operator==(const LanguageRef& a, const LanguageRef& b) noexcept {
    if (a.name_ != b.name_ || !(a.alphabet_ == b.alphabet_) || a.target_.index() != b.target_.index()) return false;
    if (auto* g = std::get_if<GrammarLanguage>(&a.target_)) {
      auto& h = std::get<GrammarLanguage>(b.target_);
      return g->grammar == h.grammar && g->complement == h.complement;
    }
    if (auto* g = std::get_if<GroupoidLanguage>(&a.target_))
      return g->problem == std::get<GroupoidLanguage>(b.target_).problem;
    auto& n = std::get<NamedLanguageRef>(a.target_);
    auto& m = std::get<NamedLanguageRef>(b.target_);
    return n.kind == m.kind && n.dyck_types == m.dyck_types;
  }

private:
  std::string name_;
  Alphabet alphabet_;
  Variant target_;
};

// ---------------------------------------------------------------------------
// Terms and formulas
// ---------------------------------------------------------------------------

struct Term {
  enum class Kind { Var, Min, Max };
  Kind kind = Kind::Var;
  std::string name; // only for Var

  static Term var(std::string n) { return Term{Kind::Var, std::move(n)}; }
  static Term min() { return Term{Kind::Min, {}}; }
  static Term max() { return Term{Kind::Max, {}}; }

  bool is_var() const noexcept { return kind == Kind::Var; }
  bool is_constant() const noexcept { return kind != Kind::Var; }

  std::string to_string() const {
    switch (kind) {
    case Kind::Min: return "min";
    case Kind::Max: return "max";
    default: return name;
    }
  }

  friend bool operator==(const Term&, const Term&) = default;
};

class Formula;

namespace node {
struct Const { bool value; };
struct Letter { char symbol; Term term; };
struct Eq { Term lhs, rhs; };
struct Lt { Term lhs, rhs; };
struct Bit { Term index, number; };  // bit `index` (1 = least significant) of `number`
struct Plus { Term lhs, rhs, sum; }; // lhs + rhs = sum
struct Not;
struct And;
struct Or;
struct Exists;
struct Forall;
struct Lindstrom;
} // namespace node

// Immutable, shareable formula AST.
class Formula {
public:
  struct Node;

  Formula() = default;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  const Node& node() const { return *node_; }
  bool valid() const noexcept { return static_cast<bool>(node_); }
  const Node* get() const noexcept { return node_.get(); }

  template <class T> const T* as() const;
  template <class T> bool is() const { return as<T>() != nullptr; }

private:
  std::shared_ptr<const Node> node_;
};

namespace node {
struct Not { Formula child; };
struct And { std::vector<Formula> children; };
struct Or { std::vector<Formula> children; };
struct Exists { std::string var; Formula body; };
struct Forall { std::string var; Formula body; };
struct Lindstrom {
  LanguageRef language;
  std::vector<std::string> vars;
  std::vector<Formula> bodies; // |language alphabet| - 1 of them
};
} // namespace node

struct Formula::Node {
  std::variant<node::Const, node::Letter, node::Eq, node::Lt, node::Bit, node::Plus, node::Not, node::And,
               node::Or, node::Exists, node::Forall, node::Lindstrom>
      v;
};

template <class T> const T* Formula::as() const { return node_ ? std::get_if<T>(&node_->v) : nullptr; }

namespace fo {

template <class T> Formula make(T t) { return Formula(std::make_shared<const Formula::Node>(Formula::Node{std::move(t)})); }

inline Formula truth(bool v) { return make(node::Const{v}); }
inline Formula letter(char symbol, Term t) { return make(node::Letter{symbol, std::move(t)}); }
inline Formula eq(Term a, Term b) { return make(node::Eq{std::move(a), std::move(b)}); }
inline Formula lt(Term a, Term b) { return make(node::Lt{std::move(a), std::move(b)}); }
inline Formula le(Term a, Term b);
inline Formula bit(Term i, Term n) { return make(node::Bit{std::move(i), std::move(n)}); }
inline Formula plus(Term a, Term b, Term c) { return make(node::Plus{std::move(a), std::move(b), std::move(c)}); }
inline Formula neg(Formula f) { return make(node::Not{std::move(f)}); }
inline Formula conj(std::vector<Formula> fs) {
  if (fs.size() == 1) return fs.front();
  return make(node::And{std::move(fs)});
}
inline Formula disj(std::vector<Formula> fs) {
  if (fs.size() == 1) return fs.front();
  return make(node::Or{std::move(fs)});
}
inline Formula implies(Formula a, Formula b) { return disj({neg(std::move(a)), std::move(b)}); }
inline Formula exists(std::string v, Formula body) { return make(node::Exists{std::move(v), std::move(body)}); }
inline Formula forall(std::string v, Formula body) { return make(node::Forall{std::move(v), std::move(body)}); }
inline Formula le(Term a, Term b) { return disj({lt(a, b), eq(a, b)}); }

inline Formula lindstrom(LanguageRef lang, std::vector<std::string> vars, std::vector<Formula> bodies) {
  if (vars.empty()) throw InvalidArgument("Lindström quantifier needs at least one bound variable");
  if (static_cast<int>(bodies.size()) != lang.alphabet().size() - 1)
    throw InvalidArgument("Lindström quantifier over " + lang.name() + " needs " +
                          std::to_string(lang.alphabet().size() - 1) + " bodies, got " +
                          std::to_string(bodies.size()));
  return make(node::Lindstrom{std::move(lang), std::move(vars), std::move(bodies)});
}

inline Term v(std::string n) { return Term::var(std::move(n)); }

} // namespace fo

// ---------------------------------------------------------------------------
// Structural utilities
// ---------------------------------------------------------------------------

inline bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (!a.valid() || !b.valid() || a.node().v.index() != b.node().v.index()) return false;
  auto all_equal = [](const std::vector<Formula>& xs, const std::vector<Formula>& ys) {
    if (xs.size() != ys.size()) return false;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!structurally_equal(xs[i], ys[i])) return false;
    return true;
  };
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node().v);
        if constexpr (std::is_same_v<T, node::Const>) return x.value == y.value;
        else if constexpr (std::is_same_v<T, node::Letter>) return x.symbol == y.symbol && x.term == y.term;
        else if constexpr (std::is_same_v<T, node::Eq> || std::is_same_v<T, node::Lt>)
          return x.lhs == y.lhs && x.rhs == y.rhs;
        else if constexpr (std::is_same_v<T, node::Bit>) return x.index == y.index && x.number == y.number;
        else if constexpr (std::is_same_v<T, node::Plus>)
          return x.lhs == y.lhs && x.rhs == y.rhs && x.sum == y.sum;
        else if constexpr (std::is_same_v<T, node::Not>) return structurally_equal(x.child, y.child);
        else if constexpr (std::is_same_v<T, node::And> || std::is_same_v<T, node::Or>)
          return all_equal(x.children, y.children);
        else if constexpr (std::is_same_v<T, node::Exists> || std::is_same_v<T, node::Forall>)
          return x.var == y.var && structurally_equal(x.body, y.body);
        else return x.language == y.language && x.vars == y.vars && all_equal(x.bodies, y.bodies);
      },
      a.node().v);
}

// Nesting depth of quantifiers; a Lindström quantifier over a k-tuple counts k.
inline int quantifier_rank(const Formula& f) {
  return std::visit(
      [](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Not>) return quantifier_rank(x.child);
        else if constexpr (std::is_same_v<T, node::And> || std::is_same_v<T, node::Or>) {
          int r = 0;
          for (const auto& c : x.children) r = std::max(r, quantifier_rank(c));
          return r;
        } else if constexpr (std::is_same_v<T, node::Exists> || std::is_same_v<T, node::Forall>)
          return 1 + quantifier_rank(x.body);
        else if constexpr (std::is_same_v<T, node::Lindstrom>) {
          int r = 0;
          for (const auto& c : x.bodies) r = std::max(r, quantifier_rank(c));
          return static_cast<int>(x.vars.size()) + r;
        } else return 0;
      },
      f.node().v);
}

namespace detail {

inline void term_vars(const Term& t, const std::set<std::string>& bound, std::set<std::string>& out) {
  if (t.is_var() && !bound.count(t.name)) out.insert(t.name);
}

inline void free_vars_rec(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Letter>) term_vars(x.term, bound, out);
        else if constexpr (std::is_same_v<T, node::Eq> || std::is_same_v<T, node::Lt>) {
          term_vars(x.lhs, bound, out);
          term_vars(x.rhs, bound, out);
        } else if constexpr (std::is_same_v<T, node::Bit>) {
          term_vars(x.index, bound, out);
          term_vars(x.number, bound, out);
        } else if constexpr (std::is_same_v<T, node::Plus>) {
          term_vars(x.lhs, bound, out);
          term_vars(x.rhs, bound, out);
          term_vars(x.sum, bound, out);
        } else if constexpr (std::is_same_v<T, node::Not>) free_vars_rec(x.child, bound, out);
        else if constexpr (std::is_same_v<T, node::And> || std::is_same_v<T, node::Or>) {
          for (const auto& c : x.children) free_vars_rec(c, bound, out);
        } else if constexpr (std::is_same_v<T, node::Exists> || std::is_same_v<T, node::Forall>) {
          auto saved = bound;
          bound.insert(x.var);
          free_vars_rec(x.body, bound, out);
          bound = std::move(saved);
        } else if constexpr (std::is_same_v<T, node::Lindstrom>) {
          auto saved = bound;
          bound.insert(x.vars.begin(), x.vars.end());
          for (const auto& c : x.bodies) free_vars_rec(c, bound, out);
          bound = std::move(saved);
        }
      },
      f.node().v);
}

inline void all_vars_rec(const Formula& f, std::set<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        auto add = [&](const Term& t) { if (t.is_var()) out.insert(t.name); };
        if constexpr (std::is_same_v<T, node::Letter>) add(x.term);
        else if constexpr (std::is_same_v<T, node::Eq> || std::is_same_v<T, node::Lt>) { add(x.lhs); add(x.rhs); }
        else if constexpr (std::is_same_v<T, node::Bit>) { add(x.index); add(x.number); }
        else if constexpr (std::is_same_v<T, node::Plus>) { add(x.lhs); add(x.rhs); add(x.sum); }
        else if constexpr (std::is_same_v<T, node::Not>) all_vars_rec(x.child, out);
        else if constexpr (std::is_same_v<T, node::And> || std::is_same_v<T, node::Or>) {
          for (const auto& c : x.children) all_vars_rec(c, out);
        } else if constexpr (std::is_same_v<T, node::Exists> || std::is_same_v<T, node::Forall>) {
          out.insert(x.var);
          all_vars_rec(x.body, out);
        } else if constexpr (std::is_same_v<T, node::Lindstrom>) {
          out.insert(x.vars.begin(), x.vars.end());
          for (const auto& c : x.bodies) all_vars_rec(c, out);
        }
      },
      f.node().v);
}

} // namespace detail

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  detail::free_vars_rec(f, bound, out);
  return out;
}

// Every variable name occurring anywhere in f, bound or free.
inline std::set<std::string> all_vars(const Formula& f) {
  std::set<std::string> out;
  detail::all_vars_rec(f, out);
  return out;
}

// Names introduced by some binder in f.
inline std::set<std::string> bound_vars(const Formula& f) {
  std::set<std::string> out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        auto merge = [&](const Formula& c) { auto s = bound_vars(c); out.insert(s.begin(), s.end()); };
        if constexpr (std::is_same_v<T, node::Not>) merge(x.child);
        else if constexpr (std::is_same_v<T, node::And> || std::is_same_v<T, node::Or>) {
          for (const auto& c : x.children) merge(c);
        } else if constexpr (std::is_same_v<T, node::Exists> || std::is_same_v<T, node::Forall>) {
          out.insert(x.var);
          merge(x.body);
        } else if constexpr (std::is_same_v<T, node::Lindstrom>) {
          out.insert(x.vars.begin(), x.vars.end());
          for (const auto& c : x.bodies) merge(c);
        }
      },
      f.node().v);
  return out;
}

// A name of the form `stem`, `stem1`, `stem2`, ... not in `taken`.
inline std::string fresh_name(const std::string& stem, const std::set<std::string>& taken) {
  if (!taken.count(stem)) return stem;
  for (int i = 1;; ++i) {
    std::string n = stem + std::to_string(i);
    if (!taken.count(n)) return n;
  }
}

// True iff f uses only order, equality, letters, connectives, and first-order quantifiers.
inline bool is_pure_fo(const Formula& f) {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Bit> || std::is_same_v<T, node::Plus> ||
                      std::is_same_v<T, node::Lindstrom>)
          return false;
        else if constexpr (std::is_same_v<T, node::Not>) return is_pure_fo(x.child);
        else if constexpr (std::is_same_v<T, node::And> || std::is_same_v<T, node::Or>)
          return std::all_of(x.children.begin(), x.children.end(), [](const Formula& c) { return is_pure_fo(c); });
        else if constexpr (std::is_same_v<T, node::Exists> || std::is_same_v<T, node::Forall>)
          return is_pure_fo(x.body);
        else return true;
      },
      f.node().v);
}

// ---------------------------------------------------------------------------
// Pretty printer (inverse of parse_formula up to whitespace)
// ---------------------------------------------------------------------------

namespace detail {

inline void print_rec(const Formula& f, std::string& out, bool operand);

inline void print_list(const std::vector<Formula>& xs, const char* sep, std::string& out) {
  out += '(';
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    print_rec(xs[i], out, true);
  }
  out += ')';
}

inline void print_rec(const Formula& f, std::string& out, bool operand) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Const>) out += x.value ? "true" : "false";
        else if constexpr (std::is_same_v<T, node::Letter>) {
          out += "P_";
          out += x.symbol;
          out += "(" + x.term.to_string() + ")";
        } else if constexpr (std::is_same_v<T, node::Eq>) out += x.lhs.to_string() + " = " + x.rhs.to_string();
        else if constexpr (std::is_same_v<T, node::Lt>) out += x.lhs.to_string() + " < " + x.rhs.to_string();
        else if constexpr (std::is_same_v<T, node::Bit>)
          out += "BIT(" + x.index.to_string() + "," + x.number.to_string() + ")";
        else if constexpr (std::is_same_v<T, node::Plus>)
          out += "PLUS(" + x.lhs.to_string() + "," + x.rhs.to_string() + "," + x.sum.to_string() + ")";
        else if constexpr (std::is_same_v<T, node::Not>) {
          out += '~';
          // And/Or print their own parentheses; infix atoms and binders need them.
          const auto& c = x.child;
          const bool wrap = c.template is<node::Eq>() || c.template is<node::Lt>() || c.template is<node::Exists>() ||
                            c.template is<node::Forall>() || c.template is<node::Lindstrom>();
          if (wrap) out += '(';
          print_rec(x.child, out, false);
          if (wrap) out += ')';
        } else if constexpr (std::is_same_v<T, node::And>) print_list(x.children, " & ", out);
        else if constexpr (std::is_same_v<T, node::Or>) print_list(x.children, " | ", out);
        else if constexpr (std::is_same_v<T, node::Exists> || std::is_same_v<T, node::Forall>) {
          if (operand) out += '(';
          out += std::is_same_v<T, node::Exists> ? "E " : "A ";
          out += x.var + ". ";
          print_rec(x.body, out, false);
          if (operand) out += ')';
        } else {
          if (operand) out += '(';
          out += "Q[" + x.language.name() + "](";
          for (std::size_t i = 0; i < x.vars.size(); ++i) {
            if (i) out += ',';
            out += x.vars[i];
          }
          out += ")[";
          for (std::size_t i = 0; i < x.bodies.size(); ++i) {
            if (i) out += " ; ";
            print_rec(x.bodies[i], out, false);
          }
          out += ']';
          if (operand) out += ')';
        }
      },
      f.node().v);
}

} // namespace detail

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print_rec(f, out, false);
  return out;
}

} // namespace strlogic

#endif // STRLOGIC_FORMULA_HPP
