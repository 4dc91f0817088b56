#ifndef STRLOGIC_RELATIVIZE_HPP
#define STRLOGIC_RELATIVIZE_HPP

#include <set>
#include <string>

#include "formula.hpp"

namespace strlogic {

enum class Side { Less, Greater };

namespace detail {

class Relativizer {
public:
  Relativizer(const std::string& pivot, Side side, std::set<std::string> taken)
      : pivot_(pivot), side_(side), taken_(std::move(taken)) {}

  Formula run(const Formula& f) {
    return std::visit([&](const auto& x) -> Formula { return visit(x, f); }, f.node().v);
  }

private:
  std::string pivot_;
  Side side_;
  std::set<std::string> taken_;

  std::string fresh() {
    std::string n = fresh_name("r", taken_);
    taken_.insert(n);
    return n;
  }

  // `v` lies on the chosen side of the pivot.
  Formula on_side(const std::string& v) const {
    return side_ == Side::Less ? fo::lt(fo::v(v), fo::v(pivot_)) : fo::lt(fo::v(pivot_), fo::v(v));
  }

  // `m` is the first (first = true) or last position on the chosen side.
  Formula extreme(const std::string& m, bool first) {
    std::string z = fresh();
    Formula order = first ? fo::le(fo::v(m), fo::v(z)) : fo::le(fo::v(z), fo::v(m));
    return fo::conj({on_side(m), fo::forall(z, fo::implies(on_side(z), order))});
  }

  Formula visit(const node::Const&, const Formula& f) { return f; }

  Formula visit(const node::Letter& x, const Formula& f) {
    if (x.term.is_var()) return f;
    std::string m = fresh();
    return fo::exists(m, fo::conj({extreme(m, x.term.kind == Term::Kind::Min), fo::letter(x.symbol, fo::v(m))}));
  }

  Formula order_atom(const Term& a, const Term& b, const Formula& f, bool strict) {
    if (a.is_var() && b.is_var()) return f;
    auto rebuild = [&](Term l, Term r) { return strict ? fo::lt(std::move(l), std::move(r)) : fo::eq(std::move(l), std::move(r)); };
    if (a.is_constant() && b.is_constant()) {
      if (a.kind == b.kind) return fo::truth(!strict);
      // Comparing min with max on the side: both hinge on whether the side has one position.
      std::string p = fresh();
      std::string q = fresh();
      Formula two_positions =
          fo::exists(p, fo::exists(q, fo::conj({on_side(p), on_side(q), fo::lt(fo::v(p), fo::v(q))})));
      if (!strict) return fo::neg(two_positions);                   // min = max
      if (a.kind == Term::Kind::Min) return two_positions;           // min < max
      return fo::truth(false);                                       // max < min
    }
    std::string m = fresh();
    const Term& c = a.is_constant() ? a : b;
    Term mv = fo::v(m);
    Formula atom = a.is_constant() ? rebuild(mv, b) : rebuild(a, mv);
    return fo::exists(m, fo::conj({extreme(m, c.kind == Term::Kind::Min), atom}));
  }

  Formula visit(const node::Eq& x, const Formula& f) { return order_atom(x.lhs, x.rhs, f, false); }
  Formula visit(const node::Lt& x, const Formula& f) { return order_atom(x.lhs, x.rhs, f, true); }

  Formula visit(const node::Bit&, const Formula&) {
    throw InvalidArgument("relativize: BIT is not preserved under relativization");
  }
  Formula visit(const node::Plus&, const Formula&) {
    throw InvalidArgument("relativize: PLUS is not preserved under relativization");
  }
  Formula visit(const node::Lindstrom&, const Formula&) {
    throw InvalidArgument("relativize: Lindström quantifiers cannot be relativized");
  }

  Formula visit(const node::Not& x, const Formula&) { return fo::neg(run(x.child)); }
  Formula visit(const node::And& x, const Formula&) {
    std::vector<Formula> cs;
    for (const auto& c : x.children) cs.push_back(run(c));
    return fo::make(node::And{std::move(cs)});
  }
  Formula visit(const node::Or& x, const Formula&) {
    std::vector<Formula> cs;
    for (const auto& c : x.children) cs.push_back(run(c));
    return fo::make(node::Or{std::move(cs)});
  }
  Formula visit(const node::Exists& x, const Formula&) {
    return fo::exists(x.var, fo::conj({on_side(x.var), run(x.body)}));
  }
  Formula visit(const node::Forall& x, const Formula&) {
    return fo::forall(x.var, fo::implies(on_side(x.var), run(x.body)));
  }
};

} // namespace detail

// Restricts every quantifier of sentence f to the positions strictly before
// (Side::Less) or after (Side::Greater) the free variable `pivot`; min and max
// become the first and last positions on that side. Rank grows by at most 2.
inline Formula relativize(const Formula& f, const std::string& pivot, Side side) {
  std::set<std::string> names = all_vars(f);
  if (bound_vars(f).count(pivot)) throw InvalidArgument("relativize: pivot '" + pivot + "' occurs bound");
  names.insert(pivot);
  return detail::Relativizer(pivot, side, std::move(names)).run(f);
}

} // namespace strlogic

#endif // STRLOGIC_RELATIVIZE_HPP
