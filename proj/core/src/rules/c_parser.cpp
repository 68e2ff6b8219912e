#include "c2r/rules/c_parser.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <string>
#include <vector>

#include "c2r/error.hpp"
#include "c2r/rules/c_lexer.hpp"

namespace c2r::rules {

namespace {

// Internal recovery signal; never escapes parse_c.
struct Fail {};

bool one_of(std::string_view s, std::initializer_list<std::string_view> set) {
    return std::find(set.begin(), set.end(), s) != set.end();
}

bool is_type_keyword(std::string_view s) {
    return one_of(s, {"void", "char", "short", "int", "long", "float", "double", "signed", "unsigned",
                      "_Bool", "bool", "_Complex", "struct", "union", "enum"});
}

bool is_qualifier(std::string_view s) {
    return one_of(s, {"const", "volatile", "restrict", "__restrict"});
}

bool is_storage(std::string_view s) {
    return one_of(s, {"typedef", "extern", "static", "auto", "register", "inline", "__inline",
                      "_Noreturn", "__extension__"});
}

bool is_assign_op(std::string_view s) {
    return one_of(s, {"=", "+=", "-=", "*=", "/=", "%=", "<<=", ">>=", "&=", "^=", "|="});
}

int binary_precedence(const Token& t) {
    if (t.kind != TokenKind::Punct) return -1;
    const std::string& s = t.text;
    if (s == "||") return 1;
    if (s == "&&") return 2;
    if (s == "|") return 3;
    if (s == "^") return 4;
    if (s == "&") return 5;
    if (s == "==" || s == "!=") return 6;
    if (s == "<" || s == ">" || s == "<=" || s == ">=") return 7;
    if (s == "<<" || s == ">>") return 8;
    if (s == "+" || s == "-") return 9;
    if (s == "*" || s == "/" || s == "%") return 10;
    return -1;
}

struct DeclSpecs {
    CType type;
    bool is_typedef = false;
    std::optional<Node> struct_def;
};

struct DeclaratorInfo {
    std::string name;
    CType type;
    std::vector<Node> params;
};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src), toks_(lex_c(src)) {}

    CAst run() {
        check_brace_balance();
        CAst ast;
        Node& root = ast.root;
        root.kind = NodeKind::TranslationUnit;
        while (!at_end()) root.children.push_back(parse_item(/*top_level=*/true));
        root.span.begin = SourcePos{1, 1, 0};
        root.span.end = toks_.back().begin;
        root.span.end.offset = src_.size();
        ast.opaque_count = opaque_count_;
        return ast;
    }

private:
    // ---- token helpers -------------------------------------------------

    const Token& tok(std::size_t ahead = 0) const {
        return toks_[std::min(i_ + ahead, toks_.size() - 1)];
    }
    bool at(std::string_view t) const { return tok().is(t); }
    bool at_end() const { return tok().kind == TokenKind::End; }
    bool accept(std::string_view t) {
        if (!at(t)) return false;
        ++i_;
        return true;
    }
    void expect(std::string_view t) {
        if (!accept(t)) throw Fail{};
    }
    bool is_identifier(std::size_t ahead = 0) const { return tok(ahead).kind == TokenKind::Identifier; }
    bool is_typedef_name(std::size_t ahead = 0) const {
        return is_identifier(ahead) && typedefs_.count(tok(ahead).text) > 0;
    }

    SourceSpan span_from(std::size_t start) const {
        SourceSpan s;
        s.begin = toks_[start].begin;
        if (i_ <= start) {
            s.end = s.begin;
            return s;
        }
        const Token& last = toks_[i_ - 1];
        s.end = last.end;
        s.end.offset = last.end.offset + 1;
        return s;
    }

    Node make(NodeKind kind, std::size_t start) const {
        Node n;
        n.kind = kind;
        n.span = span_from(start);
        return n;
    }

    std::string text_of(const SourceSpan& s) const {
        return std::string(src_.substr(s.begin.offset, s.length()));
    }

    void check_brace_balance() const {
        std::vector<int> open_lines;
        for (const auto& t : toks_) {
            if (t.is("{")) {
                open_lines.push_back(t.begin.line);
            } else if (t.is("}")) {
                if (open_lines.empty())
                    throw ParseError("unbalanced braces: unexpected '}' at line " + std::to_string(t.begin.line),
                                     t.begin.line);
                open_lines.pop_back();
            }
        }
        if (!open_lines.empty())
            throw ParseError("unbalanced braces: '{' at line " + std::to_string(open_lines.back()) +
                                 " is never closed",
                             open_lines.back());
    }

    void skip_attribute() {
        // __attribute__ (( ... ))
        ++i_;
        if (!at("(")) return;
        int depth = 0;
        do {
            if (at("(")) ++depth;
            if (at(")")) --depth;
            ++i_;
        } while (depth > 0 && !at_end());
    }

    // ---- items and recovery --------------------------------------------

    Node parse_item(bool top_level) {
        const std::size_t start = i_;
        try {
            return top_level ? parse_external() : parse_statement();
        } catch (const Fail&) {
            i_ = start;
            return recover_opaque(start);
        }
    }

    // Skips an unparseable region. A macro-like prefix `NAME(...)` followed
    // by a statement keeps the statement as a parsed child, and a brace
    // block reached while skipping is parsed as a Compound child so hints
    // inside it survive.
    Node recover_opaque(std::size_t start) {
        ++opaque_count_;
        Node op;
        op.kind = NodeKind::Opaque;

        if (is_identifier() && tok(1).is("(")) {
            ++i_;
            if (skip_balanced_parens() && !at(";") && !at("}") && !at_end()) {
                const std::size_t body_start = i_;
                try {
                    op.children.push_back(parse_statement());
                    op.span = span_from(start);
                    op.text = text_of(op.span);
                    return op;
                } catch (const Fail&) {
                    i_ = body_start;
                }
            }
            i_ = start;
        }

        int depth = 0;
        while (!at_end()) {
            if (at("}")) break;
            if (at("{")) {
                const std::size_t block_start = i_;
                try {
                    op.children.push_back(parse_compound());
                    break;
                } catch (const Fail&) {
                    i_ = block_start;
                    skip_balanced_braces();
                    depth = 0;
                    continue;
                }
            }
            if (at("(") || at("[")) ++depth;
            if ((at(")") || at("]")) && depth > 0) --depth;
            if (depth == 0 && at(";")) {
                ++i_;
                break;
            }
            ++i_;
        }
        if (i_ == start && !at_end()) ++i_;
        op.span = span_from(start);
        op.text = text_of(op.span);
        return op;
    }

    // At the token after an opening '('; consumes through the matching ')'.
    bool skip_balanced_parens() {
        int depth = 1;
        while (!at_end()) {
            if (at("{") || at("}") || at(";")) return false;
            if (at("(")) ++depth;
            if (at(")") && --depth == 0) {
                ++i_;
                return true;
            }
            ++i_;
        }
        return false;
    }

    void skip_balanced_braces() {
        int depth = 0;
        do {
            if (at("{")) ++depth;
            if (at("}")) --depth;
            ++i_;
        } while (depth > 0 && !at_end());
    }

    Node parse_external() {
        const std::size_t start = i_;
        if (accept(";")) return make(NodeKind::Empty, start);
        if (looks_like_implicit_int_function()) return parse_declaration(true, true, true);
        if (starts_declaration()) return parse_declaration(true, false, false);
        return parse_statement();
    }

    bool looks_like_implicit_int_function() const {
        if (!is_identifier() || is_typedef_name() || !tok(1).is("(")) return false;
        std::size_t k = 2;
        int depth = 1;
        while (tok(k).kind != TokenKind::End) {
            if (tok(k).is("(")) ++depth;
            if (tok(k).is(")") && --depth == 0) break;
            if (tok(k).is("{") || tok(k).is("}") || tok(k).is(";")) return false;
            ++k;
        }
        return tok(k + 1).is("{");
    }

    bool starts_decl_specs(std::size_t ahead = 0) const {
        const Token& t = tok(ahead);
        if (t.kind == TokenKind::Keyword)
            return is_type_keyword(t.text) || is_qualifier(t.text) || is_storage(t.text) ||
                   t.text == "__attribute__";
        return is_typedef_name(ahead);
    }

    bool starts_declaration() const {
        if (starts_decl_specs()) return true;
        if (!is_identifier()) return false;
        // `T x` where T is an unresolved type name (typically a stripped macro).
        if (is_identifier(1)) return true;
        if (tok(1).is("*") && is_identifier(2))
            return tok(3).is("=") || tok(3).is(";") || tok(3).is(",") || tok(3).is("[");
        return false;
    }

    // ---- declarations ----------------------------------------------------

    DeclSpecs parse_decl_specs(bool allow_unknown) {
        DeclSpecs ds;
        int longs = 0;
        bool saw_short = false, saw_unsigned = false, saw_signed = false, saw_char = false, saw_int = false,
             saw_float = false, saw_double = false, saw_void = false, saw_bool = false, saw_tagged = false,
             saw_named = false, saw_any = false;

        auto saw_type = [&] {
            return longs || saw_short || saw_unsigned || saw_signed || saw_char || saw_int || saw_float ||
                   saw_double || saw_void || saw_bool || saw_tagged || saw_named;
        };

        while (!at_end()) {
            const Token& t = tok();
            if (t.kind == TokenKind::Keyword) {
                const std::string& s = t.text;
                if (s == "typedef") {
                    ds.is_typedef = true;
                } else if (is_storage(s) || is_qualifier(s) || s == "_Complex") {
                } else if (s == "__attribute__") {
                    skip_attribute();
                    saw_any = true;
                    continue;
                } else if (s == "long") {
                    ++longs;
                } else if (s == "short") {
                    saw_short = true;
                } else if (s == "unsigned") {
                    saw_unsigned = true;
                } else if (s == "signed") {
                    saw_signed = true;
                } else if (s == "char") {
                    saw_char = true;
                } else if (s == "int") {
                    saw_int = true;
                } else if (s == "float") {
                    saw_float = true;
                } else if (s == "double") {
                    saw_double = true;
                } else if (s == "void") {
                    saw_void = true;
                } else if (s == "_Bool" || s == "bool") {
                    saw_bool = true;
                } else if (s == "struct" || s == "union") {
                    if (saw_type()) break;
                    parse_struct(ds);
                    saw_tagged = saw_any = true;
                    continue;
                } else if (s == "enum") {
                    if (saw_type()) break;
                    parse_enum(ds);
                    saw_tagged = saw_any = true;
                    continue;
                } else {
                    break;
                }
                saw_any = true;
                ++i_;
                continue;
            }
            if (t.kind == TokenKind::Identifier && !saw_type()) {
                auto it = typedefs_.find(t.text);
                if (it != typedefs_.end()) {
                    ds.type = it->second;
                    saw_named = saw_any = true;
                    ++i_;
                    continue;
                }
                if (allow_unknown && (is_identifier(1) || tok(1).is("*"))) {
                    ds.type = CType{};
                    ds.type.base = CType::Base::Unknown;
                    ds.type.tag = t.text;
                    saw_named = saw_any = true;
                    ++i_;
                    continue;
                }
            }
            break;
        }
        if (!saw_any) throw Fail{};

        if (!saw_tagged && !saw_named) {
            CType& ty = ds.type;
            ty = CType{};
            if (saw_void) ty.base = CType::Base::Void;
            else if (saw_bool) ty.base = CType::Base::Bool;
            else if (saw_char) ty.base = CType::Base::Char;
            else if (saw_float) ty.base = CType::Base::Float;
            else if (saw_double) ty.base = longs ? CType::Base::LongDouble : CType::Base::Double;
            else if (saw_short) ty.base = CType::Base::Short;
            else if (longs >= 2) ty.base = CType::Base::LongLong;
            else if (longs == 1) ty.base = CType::Base::Long;
            else ty.base = CType::Base::Int;
            ty.is_unsigned = saw_unsigned;
            ty.explicit_signed = saw_signed;
        }
        return ds;
    }

    void parse_struct(DeclSpecs& ds) {
        const std::size_t start = i_;
        const bool is_union = at("union");
        ++i_;
        while (at("__attribute__")) skip_attribute();
        std::string tag;
        if (is_identifier()) {
            tag = tok().text;
            ++i_;
        }
        if (at("{")) {
            if (tag.empty()) tag = "<anon" + std::to_string(++anon_count_) + ">";
            ++i_;
            Node def;
            def.kind = NodeKind::StructDef;
            def.text = tag;
            while (!at("}")) {
                if (at_end()) throw Fail{};
                const std::size_t member_start = i_;
                try {
                    def.children.push_back(parse_declaration(false, true, false));
                } catch (const Fail&) {
                    i_ = member_start;
                    def.children.push_back(recover_opaque(member_start));
                }
            }
            expect("}");
            def.span = span_from(start);
            ds.struct_def = std::move(def);
        }
        if (tag.empty()) throw Fail{};
        ds.type = CType{};
        ds.type.base = is_union ? CType::Base::Union : CType::Base::Struct;
        ds.type.tag = tag;
    }

    void parse_enum(DeclSpecs& ds) {
        ++i_;
        std::string tag;
        if (is_identifier()) {
            tag = tok().text;
            ++i_;
        }
        if (at("{")) skip_balanced_braces();
        ds.type = CType{};
        ds.type.base = CType::Base::Enum;
        ds.type.tag = tag;
    }

    DeclaratorInfo parse_declarator(const CType& base, bool allow_abstract) {
        DeclaratorInfo d;
        d.type = base;
        for (;;) {
            if (accept("*")) {
                ++d.type.pointer_depth;
            } else if (tok().kind == TokenKind::Keyword && is_qualifier(tok().text)) {
                ++i_;
            } else if (at("__attribute__")) {
                skip_attribute();
            } else {
                break;
            }
        }

        int nested_pointers = 0;
        if (is_identifier()) {
            d.name = tok().text;
            ++i_;
        } else if (at("(") && tok(1).is("*")) {
            ++i_;
            DeclaratorInfo inner = parse_declarator(CType{}, allow_abstract);
            expect(")");
            d.name = inner.name;
            nested_pointers = std::max(1, inner.type.pointer_depth);
        } else if (!allow_abstract) {
            throw Fail{};
        }

        bool saw_function = false;
        for (;;) {
            if (at("[")) {
                ++i_;
                while (tok().kind == TokenKind::Keyword && (is_qualifier(tok().text) || tok().text == "static"))
                    ++i_;
                if (at("]")) {
                    d.type.dims.emplace_back();
                    d.type.dim_text.emplace_back();
                } else {
                    Node e = parse_assignment();
                    d.type.dims.push_back(fold_integer_constant(e));
                    d.type.dim_text.push_back(text_of(e.span));
                }
                expect("]");
            } else if (at("(") && !saw_function) {
                ++i_;
                d.params = parse_params();
                expect(")");
                saw_function = true;
            } else {
                break;
            }
        }
        while (at("__attribute__")) skip_attribute();

        if (nested_pointers > 0) {
            // Function pointers and pointers to arrays are modelled as plain pointers.
            d.type.dims.clear();
            d.type.dim_text.clear();
            d.type.pointer_depth += nested_pointers;
            d.params.clear();
        } else if (saw_function) {
            d.type.is_function = true;
        }
        return d;
    }

    std::vector<Node> parse_params() {
        std::vector<Node> params;
        if (at(")")) return params;
        if (at("void") && tok(1).is(")")) {
            ++i_;
            return params;
        }
        for (;;) {
            if (accept("...")) break;
            const std::size_t start = i_;
            DeclSpecs ds = parse_decl_specs(true);
            DeclaratorInfo d = parse_declarator(ds.type, true);
            Node p = make(NodeKind::Declarator, start);
            p.text = d.name;
            p.type = d.type;
            params.push_back(std::move(p));
            if (!accept(",")) break;
        }
        return params;
    }

    Node parse_declaration(bool allow_function, bool member, bool implicit_int) {
        const std::size_t start = i_;
        DeclSpecs ds;
        if (!implicit_int) ds = parse_decl_specs(true);

        Node decl;
        decl.kind = NodeKind::Declaration;
        decl.type = ds.type;
        if (ds.struct_def) decl.children.push_back(std::move(*ds.struct_def));
        if (accept(";")) {
            decl.span = span_from(start);
            return decl;
        }

        bool first = true;
        for (;;) {
            const std::size_t dstart = i_;
            DeclaratorInfo d = parse_declarator(ds.type, member);
            if (member && accept(":")) parse_conditional();

            if (first && allow_function && d.type.is_function && at("{")) {
                Node fn;
                fn.kind = NodeKind::FunctionDef;
                fn.text = d.name;
                fn.type = d.type;
                for (auto& p : d.params) fn.children.push_back(std::move(p));
                fn.children.push_back(parse_compound());
                fn.span = span_from(start);
                return fn;
            }

            Node dn;
            dn.kind = NodeKind::Declarator;
            dn.text = d.name;
            dn.type = d.type;
            if (accept("=")) dn.children.push_back(at("{") ? parse_init_list() : parse_assignment());
            dn.span = span_from(dstart);
            if (ds.is_typedef && !d.name.empty()) {
                CType alias = d.type;
                alias.is_function = false;
                typedefs_[d.name] = alias;
            }
            decl.children.push_back(std::move(dn));
            first = false;
            if (accept(",")) continue;
            expect(";");
            break;
        }
        decl.span = span_from(start);
        return decl;
    }

    Node parse_init_list() {
        const std::size_t start = i_;
        expect("{");
        Node list;
        list.kind = NodeKind::InitList;
        while (!at("}")) {
            if (at_end()) throw Fail{};
            // Designators: .field = / [index] =
            for (;;) {
                if (accept(".")) {
                    if (!is_identifier()) throw Fail{};
                    ++i_;
                } else if (at("[")) {
                    ++i_;
                    parse_conditional();
                    if (accept("...")) parse_conditional();
                    expect("]");
                } else {
                    break;
                }
            }
            accept("=");
            list.children.push_back(at("{") ? parse_init_list() : parse_assignment());
            if (!accept(",")) break;
        }
        expect("}");
        list.span = span_from(start);
        return list;
    }

    // ---- statements --------------------------------------------------------

    Node parse_compound() {
        const std::size_t start = i_;
        expect("{");
        Node block;
        block.kind = NodeKind::Compound;
        while (!at("}")) {
            if (at_end()) throw Fail{};
            block.children.push_back(parse_item(/*top_level=*/false));
        }
        expect("}");
        block.span = span_from(start);
        return block;
    }

    Node parse_statement() {
        const std::size_t start = i_;
        if (at("{")) return parse_compound();

        auto finish = [&](Node n) {
            n.span = span_from(start);
            return n;
        };

        if (accept("if")) {
            Node n;
            n.kind = NodeKind::If;
            expect("(");
            n.children.push_back(parse_expr());
            expect(")");
            n.children.push_back(parse_statement());
            if (accept("else")) n.children.push_back(parse_statement());
            return finish(std::move(n));
        }
        if (accept("while")) {
            Node n;
            n.kind = NodeKind::While;
            expect("(");
            n.children.push_back(parse_expr());
            expect(")");
            n.children.push_back(parse_statement());
            return finish(std::move(n));
        }
        if (accept("do")) {
            Node n;
            n.kind = NodeKind::DoWhile;
            n.children.push_back(parse_statement());
            expect("while");
            expect("(");
            n.children.push_back(parse_expr());
            expect(")");
            expect(";");
            return finish(std::move(n));
        }
        if (accept("for")) {
            Node n;
            n.kind = NodeKind::For;
            expect("(");
            const std::size_t init_start = i_;
            if (accept(";")) {
                n.children.push_back(make(NodeKind::Empty, init_start));
            } else if (starts_declaration()) {
                n.children.push_back(parse_declaration(false, false, false));
            } else {
                Node init;
                init.kind = NodeKind::ExprStmt;
                init.children.push_back(parse_expr());
                expect(";");
                init.span = span_from(init_start);
                n.children.push_back(std::move(init));
            }
            if (at(";")) n.children.push_back(make(NodeKind::Empty, i_));
            else n.children.push_back(parse_expr());
            expect(";");
            if (at(")")) n.children.push_back(make(NodeKind::Empty, i_));
            else n.children.push_back(parse_expr());
            expect(")");
            n.children.push_back(parse_statement());
            return finish(std::move(n));
        }
        if (accept("switch")) {
            Node n;
            n.kind = NodeKind::Switch;
            expect("(");
            n.children.push_back(parse_expr());
            expect(")");
            n.children.push_back(parse_statement());
            return finish(std::move(n));
        }
        if (accept("case")) {
            Node n;
            n.kind = NodeKind::Case;
            n.children.push_back(parse_conditional());
            if (accept("...")) n.children.push_back(parse_conditional());
            expect(":");
            return finish(std::move(n));
        }
        if (accept("default")) {
            expect(":");
            return make(NodeKind::Default, start);
        }
        if (accept("return")) {
            Node n;
            n.kind = NodeKind::Return;
            if (!at(";")) n.children.push_back(parse_expr());
            expect(";");
            return finish(std::move(n));
        }
        if (accept("break")) {
            expect(";");
            return make(NodeKind::Break, start);
        }
        if (accept("continue")) {
            expect(";");
            return make(NodeKind::Continue, start);
        }
        if (accept("goto")) {
            if (!is_identifier()) throw Fail{};
            Node n;
            n.kind = NodeKind::Goto;
            n.text = tok().text;
            ++i_;
            expect(";");
            return finish(std::move(n));
        }
        if (accept(";")) return make(NodeKind::Empty, start);
        if (is_identifier() && tok(1).is(":")) {
            Node n;
            n.kind = NodeKind::Label;
            n.text = tok().text;
            i_ += 2;
            return finish(std::move(n));
        }
        if (starts_declaration()) return parse_declaration(false, false, false);

        Node n;
        n.kind = NodeKind::ExprStmt;
        n.children.push_back(parse_expr());
        expect(";");
        return finish(std::move(n));
    }

    // ---- expressions -------------------------------------------------------

    Node parse_expr() {
        const std::size_t start = i_;
        Node lhs = parse_assignment();
        while (accept(",")) {
            Node rhs = parse_assignment();
            Node n;
            n.kind = NodeKind::Comma;
            n.text = ",";
            n.children.push_back(std::move(lhs));
            n.children.push_back(std::move(rhs));
            n.span = span_from(start);
            lhs = std::move(n);
        }
        return lhs;
    }

    Node parse_assignment() {
        const std::size_t start = i_;
        Node lhs = parse_conditional();
        if (tok().kind == TokenKind::Punct && is_assign_op(tok().text)) {
            Node n;
            n.kind = NodeKind::Assign;
            n.text = tok().text;
            ++i_;
            n.children.push_back(std::move(lhs));
            n.children.push_back(parse_assignment());
            n.span = span_from(start);
            return n;
        }
        return lhs;
    }

    Node parse_conditional() {
        const std::size_t start = i_;
        Node cond = parse_binary(1);
        if (!accept("?")) return cond;
        Node n;
        n.kind = NodeKind::Conditional;
        n.children.push_back(std::move(cond));
        n.children.push_back(parse_expr());
        expect(":");
        n.children.push_back(parse_conditional());
        n.span = span_from(start);
        return n;
    }

    Node parse_binary(int min_prec) {
        const std::size_t start = i_;
        Node lhs = parse_cast();
        for (;;) {
            const int prec = binary_precedence(tok());
            if (prec < min_prec) break;
            Node n;
            n.kind = NodeKind::Binary;
            n.text = tok().text;
            ++i_;
            n.children.push_back(std::move(lhs));
            n.children.push_back(parse_binary(prec + 1));
            n.span = span_from(start);
            lhs = std::move(n);
        }
        return lhs;
    }

    bool is_type_name_at(std::size_t ahead) const {
        const Token& t = tok(ahead);
        if (t.kind == TokenKind::Keyword) return is_type_keyword(t.text) || is_qualifier(t.text);
        return is_typedef_name(ahead);
    }

    // `(name) operand` with an unresolved name is only valid C as a cast.
    bool looks_like_unknown_cast() const {
        if (!is_identifier(1) || !tok(2).is(")")) return false;
        const TokenKind k = tok(3).kind;
        return k == TokenKind::Identifier || k == TokenKind::IntLiteral || k == TokenKind::FloatLiteral ||
               k == TokenKind::CharLiteral;
    }

    CType parse_type_name() {
        DeclSpecs ds = parse_decl_specs(false);
        return parse_declarator(ds.type, true).type;
    }

    Node parse_cast() {
        const std::size_t start = i_;
        if (at("(") && (is_type_name_at(1) || looks_like_unknown_cast())) {
            ++i_;
            CType target;
            if (is_type_name_at(0)) {
                target = parse_type_name();
            } else {
                target.base = CType::Base::Unknown;
                target.tag = tok().text;
                ++i_;
            }
            expect(")");
            Node n;
            n.type = target;
            if (at("{")) {
                n.kind = NodeKind::CompoundLiteral;
                n.children.push_back(parse_init_list());
            } else {
                n.kind = NodeKind::Cast;
                n.children.push_back(parse_cast());
            }
            n.span = span_from(start);
            return n;
        }
        return parse_unary();
    }

    Node parse_unary() {
        const std::size_t start = i_;
        const Token& t = tok();
        if (t.is("++") || t.is("--")) {
            Node n;
            n.kind = NodeKind::Unary;
            n.text = t.text;
            ++i_;
            n.children.push_back(parse_unary());
            n.span = span_from(start);
            return n;
        }
        if (t.kind == TokenKind::Punct && one_of(t.text, {"&", "*", "+", "-", "~", "!"})) {
            Node n;
            n.kind = NodeKind::Unary;
            n.text = t.text;
            ++i_;
            n.children.push_back(parse_cast());
            n.span = span_from(start);
            return n;
        }
        if (t.is("sizeof")) {
            ++i_;
            Node n;
            n.kind = NodeKind::Sizeof;
            if (at("(") && is_type_name_at(1)) {
                ++i_;
                n.type = parse_type_name();
                expect(")");
            } else {
                n.children.push_back(parse_unary());
            }
            n.span = span_from(start);
            return n;
        }
        return parse_postfix();
    }

    Node parse_postfix() {
        const std::size_t start = i_;
        Node e = parse_primary();
        for (;;) {
            Node n;
            if (accept("[")) {
                n.kind = NodeKind::Subscript;
                n.children.push_back(std::move(e));
                n.children.push_back(parse_expr());
                expect("]");
            } else if (accept("(")) {
                n.kind = NodeKind::Call;
                n.children.push_back(std::move(e));
                if (!at(")")) {
                    for (;;) {
                        n.children.push_back(parse_assignment());
                        if (!accept(",")) break;
                    }
                }
                expect(")");
            } else if (at(".") || at("->")) {
                n.kind = NodeKind::Member;
                n.text = tok().text;
                ++i_;
                if (!is_identifier()) throw Fail{};
                ++i_;
                Node field = make(NodeKind::Identifier, i_ - 1);
                field.text = toks_[i_ - 1].text;
                n.children.push_back(std::move(e));
                n.children.push_back(std::move(field));
            } else if (at("++") || at("--")) {
                n.kind = NodeKind::Postfix;
                n.text = tok().text;
                ++i_;
                n.children.push_back(std::move(e));
            } else {
                break;
            }
            n.span = span_from(start);
            e = std::move(n);
        }
        return e;
    }

    Node parse_primary() {
        const std::size_t start = i_;
        const Token& t = tok();
        switch (t.kind) {
            case TokenKind::Identifier: {
                ++i_;
                Node n = make(NodeKind::Identifier, start);
                n.text = t.text;
                return n;
            }
            case TokenKind::IntLiteral:
            case TokenKind::FloatLiteral:
            case TokenKind::CharLiteral: {
                const NodeKind kind = t.kind == TokenKind::IntLiteral     ? NodeKind::IntLiteral
                                      : t.kind == TokenKind::FloatLiteral ? NodeKind::FloatLiteral
                                                                          : NodeKind::CharLiteral;
                ++i_;
                Node n = make(kind, start);
                n.text = t.text;
                return n;
            }
            case TokenKind::StringLiteral: {
                while (tok().kind == TokenKind::StringLiteral) ++i_;
                Node n = make(NodeKind::StringLiteral, start);
                n.text = text_of(n.span);
                return n;
            }
            default: break;
        }
        if (accept("(")) {
            Node inner = parse_expr();
            expect(")");
            return inner;
        }
        throw Fail{};
    }

    std::string_view src_;
    std::vector<Token> toks_;
    std::size_t i_ = 0;
    std::map<std::string, CType, std::less<>> typedefs_;
    std::size_t opaque_count_ = 0;
    int anon_count_ = 0;
};

}  // namespace

std::optional<long long> integer_literal_value(std::string_view text) {
    while (!text.empty() && (text.back() == 'u' || text.back() == 'U' || text.back() == 'l' || text.back() == 'L'))
        text.remove_suffix(1);
    if (text.empty()) return std::nullopt;
    int base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        base = 16;
        text.remove_prefix(2);
    } else if (text.size() > 1 && text[0] == '0') {
        base = 8;
        text.remove_prefix(1);
    }
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, base);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::optional<long long> fold_integer_constant(const Node& expr) {
    switch (expr.kind) {
        case NodeKind::IntLiteral: return integer_literal_value(expr.text);
        case NodeKind::Cast: return fold_integer_constant(expr.children.at(0));
        case NodeKind::Unary: {
            auto v = fold_integer_constant(expr.children.at(0));
            if (!v) return std::nullopt;
            if (expr.text == "-") return -*v;
            if (expr.text == "+") return *v;
            if (expr.text == "~") return ~*v;
            return std::nullopt;
        }
        case NodeKind::Binary: {
            auto a = fold_integer_constant(expr.children.at(0));
            auto b = fold_integer_constant(expr.children.at(1));
            if (!a || !b) return std::nullopt;
            const std::string& op = expr.text;
            if (op == "+") return *a + *b;
            if (op == "-") return *a - *b;
            if (op == "*") return *a * *b;
            if (op == "/" && *b != 0) return *a / *b;
            if (op == "%" && *b != 0) return *a % *b;
            if (op == "<<" && *b >= 0 && *b < 63) return *a << *b;
            if (op == ">>" && *b >= 0 && *b < 63) return *a >> *b;
            if (op == "&") return *a & *b;
            if (op == "|") return *a | *b;
            if (op == "^") return *a ^ *b;
            return std::nullopt;
        }
        default: return std::nullopt;
    }
}

CAst parse_c(std::string_view source) { return Parser(source).run(); }

}  // namespace c2r::rules
