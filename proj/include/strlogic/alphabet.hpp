#ifndef STRLOGIC_ALPHABET_HPP
#define STRLOGIC_ALPHABET_HPP

#include <array>
#include <cctype>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace strlogic {

// Ordered sequence of distinct single-character symbols. The listing order is
// the order used when a quantifier selects letters. Cheap to copy.
class Alphabet {
public:
  Alphabet() = default;

  explicit Alphabet(std::string_view symbols) {
    if (symbols.empty()) throw InvalidArgument("alphabet must be nonempty");
    auto data = std::make_shared<Data>();
    data->index.fill(-1);
    for (char c : symbols) {
      auto u = static_cast<unsigned char>(c);
      if (std::isspace(u)) throw InvalidArgument("alphabet symbols must not be whitespace");
      if (data->index[u] >= 0) throw InvalidArgument(std::string("duplicate alphabet symbol '") + c + "'");
      data->index[u] = static_cast<int>(data->symbols.size());
      data->symbols.push_back(c);
    }
    data_ = std::move(data);
  }

  // Parses the inline declaration form "(a,b,c)".
  static Alphabet parse(std::string_view text) {
    std::string symbols;
    std::size_t i = 0;
    auto skip = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skip();
    if (i >= text.size() || text[i] != '(') throw SyntaxError("expected '(' in alphabet", i);
    ++i;
    while (true) {
      skip();
      if (i >= text.size()) throw SyntaxError("unterminated alphabet", i);
      symbols.push_back(text[i++]);
      skip();
      if (i < text.size() && text[i] == ',') { ++i; continue; }
      if (i < text.size() && text[i] == ')') { ++i; break; }
      throw SyntaxError("expected ',' or ')' in alphabet", i);
    }
    skip();
    if (i != text.size()) throw SyntaxError("trailing text after alphabet", i);
    return Alphabet(symbols);
  }

  int size() const noexcept { return data_ ? static_cast<int>(data_->symbols.size()) : 0; }
  bool empty() const noexcept { return size() == 0; }
  char symbol(int index) const { return data_->symbols.at(static_cast<std::size_t>(index)); }
  std::string_view symbols() const noexcept {
    return data_ ? std::string_view(data_->symbols) : std::string_view();
  }

  std::optional<int> index_of(char c) const noexcept {
    if (!data_) return std::nullopt;
    int i = data_->index[static_cast<unsigned char>(c)];
    if (i < 0) return std::nullopt;
    return i;
  }

  bool contains(char c) const noexcept { return index_of(c).has_value(); }

  int require(char c) const {
    auto i = index_of(c);
    if (!i) throw InvalidArgument(std::string("symbol '") + c + "' not in alphabet " + to_string());
    return *i;
  }

  std::string to_string() const {
    std::string out = "(";
    for (int i = 0; i < size(); ++i) {
      if (i) out += ',';
      out += symbol(i);
    }
    return out + ")";
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) noexcept {
    return a.symbols() == b.symbols();
  }

private:
  struct Data {
    std::string symbols;
    std::array<int, 256> index{};
  };
  std::shared_ptr<const Data> data_;
};

// A word over an alphabet; letters are symbol indices, positions are 1-based.
class Word {
public:
  Word() = default;
  Word(Alphabet alphabet, std::vector<int> letters)
      : alphabet_(std::move(alphabet)), letters_(std::move(letters)) {
    for (int l : letters_)
      if (l < 0 || l >= alphabet_.size()) throw InvalidArgument("letter index out of range");
  }

  static Word from_string(const Alphabet& alphabet, std::string_view text) {
    std::vector<int> letters;
    letters.reserve(text.size());
    for (char c : text) letters.push_back(alphabet.require(c));
    return Word(alphabet, std::move(letters));
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int length() const noexcept { return static_cast<int>(letters_.size()); }
  bool empty() const noexcept { return letters_.empty(); }
  std::span<const int> letters() const noexcept { return letters_; }

  // Letter index at 1-based position.
  int at(int position) const { return letters_.at(static_cast<std::size_t>(position - 1)); }
  char symbol_at(int position) const { return alphabet_.symbol(at(position)); }

  std::string to_string() const {
    std::string out;
    out.reserve(letters_.size());
    for (int l : letters_) out += alphabet_.symbol(l);
    return out;
  }

  friend bool operator==(const Word& a, const Word& b) noexcept {
    return a.alphabet_ == b.alphabet_ && a.letters_ == b.letters_;
  }
  friend bool operator<(const Word& a, const Word& b) noexcept {
    if (a.letters_ != b.letters_) return a.letters_ < b.letters_;
    return a.alphabet_.symbols() < b.alphabet_.symbols();
  }

private:
  Alphabet alphabet_;
  std::vector<int> letters_;
};

// Calls fn(word) for every word over `alphabet` with min_len <= |w| <= max_len,
// shorter words first, lexicographic within a length.
template <class Fn>
void for_each_word(const Alphabet& alphabet, int min_len, int max_len, Fn&& fn) {
  const int s = alphabet.size();
  for (int len = min_len; len <= max_len; ++len) {
    std::vector<int> letters(static_cast<std::size_t>(len), 0);
    while (true) {
      fn(Word(alphabet, letters));
      int i = len - 1;
      while (i >= 0 && letters[static_cast<std::size_t>(i)] == s - 1) letters[static_cast<std::size_t>(i--)] = 0;
      if (i < 0) break;
      ++letters[static_cast<std::size_t>(i)];
    }
  }
}

} // namespace strlogic

#endif // STRLOGIC_ALPHABET_HPP
