#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "c2r/rules/c_ast.hpp"

namespace c2r::rules {

enum class TokenKind { Identifier, Keyword, IntLiteral, FloatLiteral, CharLiteral, StringLiteral, Punct, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    SourcePos begin;
    SourcePos end;  // position of the last character

    bool is(std::string_view punct_or_keyword) const {
        return (kind == TokenKind::Punct || kind == TokenKind::Keyword) && text == punct_or_keyword;
    }
};

// Tokenizes C source. Comments and preprocessor lines are skipped (a
// directive runs to the first newline not preceded by a backslash). The
// returned vector always ends with an End token. Never throws: stray
// characters are returned as single-character Punct tokens.
std::vector<Token> lex_c(std::string_view source);

bool is_c_keyword(std::string_view word);

}  // namespace c2r::rules
