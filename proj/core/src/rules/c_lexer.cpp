#include "c2r/rules/c_lexer.hpp"

#include <array>
#include <cctype>

namespace c2r::rules {

namespace {

constexpr std::array<std::string_view, 44> kKeywords = {
    "auto",     "break",    "case",     "char",   "const",    "continue", "default",  "do",
    "double",   "else",     "enum",     "extern", "float",    "for",      "goto",     "if",
    "inline",   "int",      "long",     "register", "restrict", "return", "short",    "signed",
    "sizeof",   "static",   "struct",   "switch", "typedef",  "union",    "unsigned", "void",
    "volatile", "while",    "_Bool",    "_Complex", "_Imaginary", "bool", "__inline", "__restrict",
    "_Noreturn", "_Static_assert", "__extension__", "__attribute__",
};

// Longest first within each leading character is not required: we try the
// three-character set, then two, then one.
constexpr std::array<std::string_view, 3> kPunct3 = {"...", "<<=", ">>="};
constexpr std::array<std::string_view, 19> kPunct2 = {
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&",
    "||", "+=", "-=", "*=", "/=", "%=", "&=", "^=", "|=",
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        bool line_start = true;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                advance();
                line_start = true;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
                continue;
            }
            if (c == '\\' && peek(1) == '\n') {
                advance();
                advance();
                continue;
            }
            if (c == '/' && peek(1) == '/') {
                skip_line_comment();
                continue;
            }
            if (c == '/' && peek(1) == '*') {
                skip_block_comment();
                continue;
            }
            if (c == '#' && line_start) {
                skip_directive();
                continue;
            }
            line_start = false;
            out.push_back(next_token());
        }
        Token end;
        end.kind = TokenKind::End;
        end.begin = here();
        end.end = here();
        out.push_back(end);
        return out;
    }

private:
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    SourcePos here() const { return SourcePos{line_, col_, pos_}; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_line_comment() {
        while (pos_ < src_.size() && src_[pos_] != '\n') {
            if (src_[pos_] == '\\' && peek(1) == '\n') advance();
            advance();
        }
    }

    void skip_block_comment() {
        advance();
        advance();
        while (pos_ < src_.size() && !(src_[pos_] == '*' && peek(1) == '/')) advance();
        if (pos_ < src_.size()) {
            advance();
            advance();
        }
    }

    void skip_directive() {
        while (pos_ < src_.size() && src_[pos_] != '\n') {
            if (src_[pos_] == '\\' && peek(1) == '\n') {
                advance();
            } else if (src_[pos_] == '/' && peek(1) == '*') {
                skip_block_comment();
                continue;
            }
            advance();
        }
    }

    Token finish(TokenKind kind, SourcePos begin, SourcePos last) const {
        Token t;
        t.kind = kind;
        t.begin = begin;
        t.end = last;
        t.text = std::string(src_.substr(begin.offset, pos_ - begin.offset));
        return t;
    }

    Token next_token() {
        const SourcePos begin = here();
        SourcePos last = begin;
        auto step = [&] {
            last = here();
            advance();
        };
        const char c = src_[pos_];

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            // String/char prefixes: L"", u8"", u'', U''.
            if ((c == 'L' || c == 'u' || c == 'U') && (peek(1) == '"' || peek(1) == '\'')) {
                step();
                return quoted(begin, last);
            }
            if (c == 'u' && peek(1) == '8' && peek(2) == '"') {
                step();
                step();
                return quoted(begin, last);
            }
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                step();
            Token t = finish(TokenKind::Identifier, begin, last);
            if (is_c_keyword(t.text)) t.kind = TokenKind::Keyword;
            return t;
        }

        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            bool is_float = false;
            const bool hex = c == '0' && (peek(1) == 'x' || peek(1) == 'X');
            while (pos_ < src_.size()) {
                char d = src_[pos_];
                if ((d == 'e' || d == 'E') && !hex && (peek(1) == '+' || peek(1) == '-')) {
                    is_float = true;
                    step();
                    step();
                    continue;
                }
                if ((d == 'p' || d == 'P') && hex && (peek(1) == '+' || peek(1) == '-')) {
                    is_float = true;
                    step();
                    step();
                    continue;
                }
                if (d == '.') {
                    is_float = true;
                } else if ((d == 'e' || d == 'E') && !hex) {
                    is_float = true;
                } else if (!std::isalnum(static_cast<unsigned char>(d)) && d != '_') {
                    break;
                }
                step();
            }
            return finish(is_float ? TokenKind::FloatLiteral : TokenKind::IntLiteral, begin, last);
        }

        if (c == '"' || c == '\'') return quoted(begin, last);

        for (auto p : kPunct3) {
            if (src_.substr(pos_, 3) == p) {
                step();
                step();
                step();
                return finish(TokenKind::Punct, begin, last);
            }
        }
        for (auto p : kPunct2) {
            if (src_.substr(pos_, 2) == p) {
                step();
                step();
                return finish(TokenKind::Punct, begin, last);
            }
        }
        step();
        return finish(TokenKind::Punct, begin, last);
    }

    // Consumes a quoted literal starting at the current quote character.
    Token quoted(SourcePos begin, SourcePos last) {
        const char quote = src_[pos_];
        last = here();
        advance();
        while (pos_ < src_.size() && src_[pos_] != quote && src_[pos_] != '\n') {
            if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) advance();
            last = here();
            advance();
        }
        if (pos_ < src_.size() && src_[pos_] == quote) {
            last = here();
            advance();
        }
        return finish(quote == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral, begin, last);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

bool is_c_keyword(std::string_view word) {
    for (auto k : kKeywords)
        if (k == word) return true;
    return false;
}

std::vector<Token> lex_c(std::string_view source) { return Lexer(source).run(); }

}  // namespace c2r::rules
