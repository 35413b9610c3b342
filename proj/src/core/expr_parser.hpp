#pragma once

// Recursive-descent parser for the expression grammar shared by scalars,
// forms and vector fields:
//
//   expr   := term (("+"|"-") term)*
//   term   := ["+"|"-"] factor (("*"|"^") factor)*
//   factor := base ("^" uint)?
//   base   := rational | ident | "(" expr ")"
//   rational := int ("/" uint)?
//
// "^" followed by an unsigned integer is a power; any other "^" is a wedge.
// Identifier resolution is left to the consumer of the tree.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rational.hpp"

namespace coiso {

struct ExprNode {
  enum class Kind { Number, Ident, Add, Sub, Neg, Mul, Wedge, Pow };

  Kind kind;
  std::size_t offset = 0;
  Rational number;        // Number
  std::string name;       // Ident
  unsigned exponent = 0;  // Pow
  std::vector<std::unique_ptr<ExprNode>> children;
};

using ExprPtr = std::unique_ptr<ExprNode>;

// Parses the whole of `text`; trailing tokens are a SyntaxError.
// `base_offset` is added to every reported position.
ExprPtr parse_expression(std::string_view text, std::size_t base_offset = 0);

bool is_identifier(std::string_view s);

}  // namespace coiso
