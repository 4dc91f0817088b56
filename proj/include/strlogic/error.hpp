#ifndef STRLOGIC_ERROR_HPP
#define STRLOGIC_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace strlogic {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (formula, grammar, automaton files).
class SyntaxError : public Error {
public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " at offset " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

// Well-formed input that violates an operation's precondition.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// A configured size cap (type budget, power-set cap, rank cap) was exceeded.
class CapExceeded : public Error {
public:
  using Error::Error;
};

} // namespace strlogic

#endif // STRLOGIC_ERROR_HPP
