#pragma once

#include <set>
#include <stdexcept>
#include <string>

#include "liesym/expr.hpp"

namespace liesym {

struct ParseContext {
  std::set<std::string> params;
  std::set<std::string> rvars;   // reduced independent variables besides t, x, y
  std::set<std::string> rfuns;   // reduced dependent functions (w, v, ...)
  std::string prime_var = "s";   // variable that v', v'', ... differentiate by
  bool allow_coef = true;        // tau, xi, zeta, eta and their derivatives
  std::map<std::string, Expr> values;  // bound names, substituted while parsing
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// The text is well formed but its value is not admissible (division by zero, sqrt of a negative, ...).
class ValueError : public ParseError {
 public:
  using ParseError::ParseError;
};

Expr parse(const std::string& text, const ParseContext& ctx = {});

// "a=1,b=-2/3" -> {a: 1, b: -2/3}
std::map<std::string, Rational> parse_bindings(const std::string& text);
Rational parse_rational(const std::string& text);

}  // namespace liesym
