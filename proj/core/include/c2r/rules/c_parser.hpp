#pragma once

#include <optional>
#include <string_view>

#include "c2r/rules/c_ast.hpp"

namespace c2r::rules {

// Parses a single C translation unit (competition-style C99, preprocessor
// directives stripped). Statements that cannot be parsed become Opaque nodes
// with correct spans; statements are also accepted at file scope so that
// code fragments can be analyzed.
//
// Throws ParseError only when braces at file scope are unbalanced.
CAst parse_c(std::string_view source);

// Folds an integer constant expression built from literals and arithmetic.
std::optional<long long> fold_integer_constant(const Node& expr);

// Value of an integer literal token text (decimal, hex, octal, with suffixes).
std::optional<long long> integer_literal_value(std::string_view text);

}  // namespace c2r::rules
