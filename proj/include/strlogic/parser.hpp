#ifndef STRLOGIC_PARSER_HPP
#define STRLOGIC_PARSER_HPP

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alphabet.hpp"
#include "error.hpp"
#include "formula.hpp"

// Surface syntax (ASCII):
//
//   formula  := disj ( '->' formula )?
//   disj     := conj ( '|' conj )*
//   conj     := unary ( '&' unary )*
//   unary    := ('~' | '!') unary | binder | atom | '(' formula ')'
//   binder   := ('E' | 'A' | 'exists' | 'forall' | 'All') vars '.' formula
//             | 'E'var '.' formula | 'A'var '.' formula         e.g. "Ex. P_a(x)"
//             | 'Q[' name ']' vars ( '.' formula | '[' formula (';' formula)* ']' )
//   vars     := ident (','? ident)* | '(' ident (',' ident)* ')'
//   atom     := 'true' | 'false' | 'P_'c '(' term ')' | 'BIT(' term ',' term ')'
//             | 'PLUS(' term ',' term ',' term ')' | term '+' term '=' term
//             | term ('=' | '<' | '<=' | '>' | '>=' | '!=') term
//   term     := ident | 'min' | 'max'
//
// Binders extend as far to the right as possible. Derived forms (->, <=, >, >=,
// !=) are expanded into the core AST. A binder that re-binds a name already
// bound in an enclosing scope is renamed, so bound names are always distinct
// from enclosing bound names.

namespace strlogic {

// Languages available to Q[name] besides the built-in registry.
struct LanguageEnv {
  std::map<std::string, LanguageRef> languages;

  void add(const LanguageRef& lang) { languages.insert_or_assign(lang.name(), lang); }
};

inline std::optional<LanguageRef> builtin_language(const std::string& name) {
  if (name == "Maj" || name == "Majority") return LanguageRef::named(NamedLanguage::Majority);
  if (name == "EqualZeroOne" || name == "Eq01") return LanguageRef::named(NamedLanguage::EqualZeroOne);
  if (name == "Add" || name == "AdditionHelper") return LanguageRef::named(NamedLanguage::AdditionHelper);
  for (int t = 1; t <= 4; ++t)
    if (name == "Dyck" + std::to_string(t) || name == "Dyck(" + std::to_string(t) + ")")
      return LanguageRef::named(NamedLanguage::Dyck, t);
  return std::nullopt;
}

namespace detail {

class FormulaParser {
public:
  FormulaParser(std::string_view text, Alphabet sigma, const LanguageEnv* env)
      : text_(text), sigma_(std::move(sigma)), env_(env) {
    tokenize();
  }

  Formula parse_one() {
    Formula f = formula();
    expect_end();
    return f;
  }

  std::vector<Formula> parse_list() {
    std::vector<Formula> out;
    out.push_back(formula());
    while (accept(";")) out.push_back(formula());
    expect_end();
    return out;
  }

private:
  enum class Kind { Ident, Letter, Op, LangName, End };
  struct Token {
    Kind kind;
    std::string text;
    std::size_t pos;
  };

  std::string_view text_;
  Alphabet sigma_;
  const LanguageEnv* env_;
  std::vector<Token> tokens_;
  std::size_t at_ = 0;
  std::set<std::string> used_names_;
  // innermost binding last: (source name, AST name)
  std::vector<std::pair<std::string, std::string>> scope_;

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

  void tokenize() {
    std::size_t i = 0;
    while (i < text_.size()) {
      char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
      if (c == '#') { // comment to end of line
        while (i < text_.size() && text_[i] != '\n') ++i;
        continue;
      }
      if (c == 'P' && i + 2 < text_.size() && text_[i + 1] == '_') {
        tokens_.push_back({Kind::Letter, std::string(1, text_[i + 2]), i});
        i += 3;
        continue;
      }
      if (c == 'Q' && i + 1 < text_.size() && text_[i + 1] == '[') {
        std::size_t close = text_.find(']', i + 2);
        if (close == std::string_view::npos) throw SyntaxError("unterminated Q[...]", i);
        tokens_.push_back({Kind::LangName, std::string(text_.substr(i + 2, close - i - 2)), i});
        i = close + 1;
        continue;
      }
      if (ident_start(c)) {
        std::size_t j = i;
        while (j < text_.size() && ident_char(text_[j])) ++j;
        tokens_.push_back({Kind::Ident, std::string(text_.substr(i, j - i)), i});
        used_names_.insert(tokens_.back().text);
        i = j;
        continue;
      }
      static const char* two[] = {"->", "<=", ">=", "!="};
      bool matched = false;
      for (const char* op : two) {
        if (text_.substr(i, 2) == op) {
          tokens_.push_back({Kind::Op, op, i});
          i += 2;
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string_view("()[],;.~!&|=<>+").find(c) != std::string_view::npos) {
        tokens_.push_back({Kind::Op, std::string(1, c), i});
        ++i;
        continue;
      }
      throw SyntaxError(std::string("unexpected character '") + c + "'", i);
    }
    tokens_.push_back({Kind::End, "", text_.size()});
  }

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(at_ + ahead, tokens_.size() - 1)];
  }
  bool is_op(const Token& t, std::string_view op) const { return t.kind == Kind::Op && t.text == op; }
  bool accept(std::string_view op) {
    if (is_op(peek(), op)) { ++at_; return true; }
    return false;
  }
  void expect(std::string_view op) {
    if (!accept(op)) throw SyntaxError("expected '" + std::string(op) + "'", peek().pos);
  }
  void expect_end() {
    if (peek().kind != Kind::End) throw SyntaxError("unexpected trailing input '" + peek().text + "'", peek().pos);
  }

  static bool reserved(const std::string& s) {
    static const std::set<std::string> words = {"min", "max", "true", "false", "BIT", "PLUS",
                                                "E", "A", "exists", "forall", "All"};
    return words.count(s) > 0;
  }

  std::string ident() {
    const Token& t = peek();
    if (t.kind != Kind::Ident || reserved(t.text)) throw SyntaxError("expected variable name", t.pos);
    ++at_;
    return t.text;
  }

  std::string resolve(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return it->second;
    return name;
  }

  // Opens a binding for `name`; renames it when an enclosing binder already uses it.
  std::string bind(const std::string& name) {
    std::string ast_name = name;
    for (const auto& [src, ast] : scope_) {
      if (ast == name || src == name) {
        ast_name = fresh_name(name + "_", used_names_);
        break;
      }
    }
    used_names_.insert(ast_name);
    scope_.emplace_back(name, ast_name);
    return ast_name;
  }

  Formula formula() {
    Formula lhs = disjunction();
    if (accept("->")) return fo::implies(lhs, formula());
    return lhs;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    while (accept("|")) parts.push_back(conjunction());
    return parts.size() == 1 ? parts.front() : fo::make(node::Or{std::move(parts)});
  }

  Formula conjunction() {
    std::vector<Formula> parts{unary()};
    while (accept("&")) parts.push_back(unary());
    return parts.size() == 1 ? parts.front() : fo::make(node::And{std::move(parts)});
  }

  bool binder_keyword(const Token& t) const {
    return t.kind == Kind::Ident &&
           (t.text == "E" || t.text == "A" || t.text == "exists" || t.text == "forall" || t.text == "All");
  }

  Formula unary() {
    const Token& t = peek();
    if (accept("~") || accept("!")) return fo::neg(unary());
    if (t.kind == Kind::LangName) return lindstrom();
    if (binder_keyword(t)) {
      ++at_;
      bool universal = t.text == "A" || t.text == "forall" || t.text == "All";
      std::vector<std::string> names = var_list();
      expect(".");
      return binder(universal, names);
    }
    // Compact form "Ex." / "Ay." : keyword letter glued to the variable.
    if (t.kind == Kind::Ident && t.text.size() > 1 && (t.text[0] == 'E' || t.text[0] == 'A') &&
        is_op(peek(1), ".")) {
      bool universal = t.text[0] == 'A';
      std::string name = t.text.substr(1);
      at_ += 2;
      return binder(universal, {name});
    }
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    return atom();
  }

  std::vector<std::string> var_list() {
    std::vector<std::string> names;
    if (accept("(")) {
      names.push_back(ident());
      while (accept(",")) names.push_back(ident());
      expect(")");
      return names;
    }
    names.push_back(ident());
    while (true) {
      if (is_op(peek(), ",") && peek(1).kind == Kind::Ident) { ++at_; names.push_back(ident()); continue; }
      if (peek().kind == Kind::Ident && !reserved(peek().text)) { names.push_back(ident()); continue; }
      break;
    }
    return names;
  }

  Formula binder(bool universal, const std::vector<std::string>& names) {
    std::vector<std::string> bound;
    for (const auto& n : names) bound.push_back(bind(n));
    Formula body = formula();
    for (std::size_t i = 0; i < names.size(); ++i) scope_.pop_back();
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      body = universal ? fo::forall(*it, body) : fo::exists(*it, body);
    return body;
  }

  LanguageRef language(const Token& t) {
    if (env_) {
      auto it = env_->languages.find(t.text);
      if (it != env_->languages.end()) return it->second;
    }
    if (auto b = builtin_language(t.text)) return *b;
    throw SyntaxError("unknown language '" + t.text + "'", t.pos);
  }

  Formula lindstrom() {
    const Token name = peek();
    ++at_;
    LanguageRef lang = language(name);
    std::vector<std::string> names = var_list();
    std::vector<std::string> bound;
    for (const auto& n : names) bound.push_back(bind(n));
    std::vector<Formula> bodies;
    if (accept(".")) {
      bodies.push_back(formula());
    } else {
      expect("[");
      bodies.push_back(formula());
      while (accept(";")) bodies.push_back(formula());
      expect("]");
    }
    for (std::size_t i = 0; i < names.size(); ++i) scope_.pop_back();
    if (static_cast<int>(bodies.size()) != lang.alphabet().size() - 1)
      throw SyntaxError("quantifier Q[" + lang.name() + "] expects " + std::to_string(lang.alphabet().size() - 1) +
                            " bodies, got " + std::to_string(bodies.size()),
                        name.pos);
    return fo::lindstrom(lang, std::move(bound), std::move(bodies));
  }

  Term term() {
    const Token& t = peek();
    if (t.kind != Kind::Ident) throw SyntaxError("expected term", t.pos);
    ++at_;
    if (t.text == "min") return Term::min();
    if (t.text == "max") return Term::max();
    if (reserved(t.text)) throw SyntaxError("unexpected keyword '" + t.text + "'", t.pos);
    return Term::var(resolve(t.text));
  }

  Formula atom() {
    const Token& t = peek();
    if (t.kind == Kind::Letter) {
      ++at_;
      char c = t.text[0];
      if (!sigma_.contains(c))
        throw SyntaxError(std::string("unknown symbol '") + c + "' for alphabet " + sigma_.to_string(), t.pos);
      expect("(");
      Term x = term();
      expect(")");
      return fo::letter(c, x);
    }
    if (t.kind == Kind::Ident && (t.text == "true" || t.text == "false")) {
      ++at_;
      return fo::truth(t.text == "true");
    }
    if (t.kind == Kind::Ident && t.text == "BIT" && is_op(peek(1), "(")) {
      at_ += 2;
      Term i = term();
      expect(",");
      Term n = term();
      expect(")");
      return fo::bit(i, n);
    }
    if (t.kind == Kind::Ident && t.text == "PLUS" && is_op(peek(1), "(")) {
      at_ += 2;
      Term a = term();
      expect(",");
      Term b = term();
      expect(",");
      Term c = term();
      expect(")");
      return fo::plus(a, b, c);
    }
    if (t.kind != Kind::Ident) throw SyntaxError("expected formula", t.pos);
    Term lhs = term();
    if (accept("+")) {
      Term rhs = term();
      expect("=");
      return fo::plus(lhs, rhs, term());
    }
    const Token op = peek();
    if (op.kind != Kind::Op) throw SyntaxError("expected comparison operator", op.pos);
    ++at_;
    Term rhs = term();
    if (op.text == "=") return fo::eq(lhs, rhs);
    if (op.text == "<") return fo::lt(lhs, rhs);
    if (op.text == "<=") return fo::le(lhs, rhs);
    if (op.text == ">") return fo::lt(rhs, lhs);
    if (op.text == ">=") return fo::le(rhs, lhs);
    if (op.text == "!=") return fo::neg(fo::eq(lhs, rhs));
    throw SyntaxError("expected comparison operator", op.pos);
  }
};

} // namespace detail

// Parses one formula over input alphabet `sigma`.
inline Formula parse_formula(std::string_view text, const Alphabet& sigma, const LanguageEnv* env = nullptr) {
  return detail::FormulaParser(text, sigma, env).parse_one();
}

// Parses a ';'-separated body tuple, as used for transformations with |target| > 2.
inline std::vector<Formula> parse_formula_list(std::string_view text, const Alphabet& sigma,
                                               const LanguageEnv* env = nullptr) {
  return detail::FormulaParser(text, sigma, env).parse_list();
}

// Splits an optional leading alphabet declaration "(a,b,c)" off formula file text.
inline std::pair<std::optional<Alphabet>, std::string> split_alphabet_header(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '(') {
    std::size_t j = i + 1;
    bool ok = true;
    while (ok) {
      while (j < text.size() && text[j] == ' ') ++j;
      if (j >= text.size()) { ok = false; break; }
      ++j; // the symbol
      while (j < text.size() && text[j] == ' ') ++j;
      if (j < text.size() && text[j] == ',') { ++j; continue; }
      if (j < text.size() && text[j] == ')') break;
      ok = false;
    }
    if (ok) {
      Alphabet sigma = Alphabet::parse(text.substr(i, j + 1 - i));
      return {sigma, std::string(text.substr(j + 1))};
    }
  }
  return {std::nullopt, std::string(text)};
}

} // namespace strlogic

#endif // STRLOGIC_PARSER_HPP
