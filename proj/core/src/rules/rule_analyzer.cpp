#include "c2r/rules/rule_analyzer.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include <nlohmann/json.hpp>

#include "c2r/rules/c_parser.hpp"

namespace c2r::rules {

namespace {

bool one_of(std::string_view s, std::initializer_list<std::string_view> set) {
    return std::find(set.begin(), set.end(), s) != set.end();
}

bool is_alloc_function(std::string_view name) { return one_of(name, {"malloc", "calloc", "realloc", "free"}); }

bool is_io_function(std::string_view name) {
    return one_of(name, {"scanf", "printf", "getchar", "gets", "fgets", "puts", "putchar", "fscanf", "fprintf"});
}

bool is_statement(NodeKind k) {
    switch (k) {
        case NodeKind::TranslationUnit:
        case NodeKind::FunctionDef:
        case NodeKind::Compound:
        case NodeKind::ExprStmt:
        case NodeKind::If:
        case NodeKind::While:
        case NodeKind::DoWhile:
        case NodeKind::For:
        case NodeKind::Switch:
        case NodeKind::Return:
        case NodeKind::Opaque:
        case NodeKind::Declaration:
        case NodeKind::StructDef: return true;
        default: return false;
    }
}

std::string callee_name(const Node& call) {
    const Node& callee = call.children.at(0);
    return callee.kind == NodeKind::Identifier ? callee.text : std::string{};
}

std::string strip_integer_suffix(std::string text) {
    while (!text.empty() && one_of(std::string_view(&text.back(), 1), {"u", "U", "l", "L"})) text.pop_back();
    return text;
}

int rust_precedence(const Node& n) {
    if (n.kind == NodeKind::Binary) {
        const std::string& op = n.text;
        if (op == "||") return 1;
        if (op == "&&") return 2;
        if (op == "==" || op == "!=" || op == "<" || op == ">" || op == "<=" || op == ">=") return 3;
        if (op == "|") return 4;
        if (op == "^") return 5;
        if (op == "&") return 6;
        if (op == "<<" || op == ">>") return 7;
        if (op == "+" || op == "-") return 8;
        return 9;  // * / %
    }
    if (n.kind == NodeKind::Assign || n.kind == NodeKind::Conditional || n.kind == NodeKind::Comma) return 0;
    if (n.kind == NodeKind::Cast) return 10;
    if (n.kind == NodeKind::Unary) return 11;
    return 12;
}

bool is_bitwise(const Node& n) {
    return n.kind == NodeKind::Binary && one_of(n.text, {"&", "|", "^", "<<", ">>"});
}

}  // namespace

std::string_view category_name(RuleCategory category) {
    switch (category) {
        case RuleCategory::Pointers: return "Pointers";
        case RuleCategory::IO: return "IO";
        case RuleCategory::Mixtype: return "Mixtype";
        case RuleCategory::Array: return "Array";
    }
    return "?";
}

std::optional<RuleCategory> parse_category(std::string_view name) {
    for (auto c : kAllCategories)
        if (category_name(c) == name) return c;
    if (name == "I/O") return RuleCategory::IO;
    return std::nullopt;
}

std::string rust_type_name(const CType& t) {
    using B = CType::Base;
    switch (t.base) {
        case B::Bool: return "bool";
        case B::Char: return t.explicit_signed ? "i8" : "u8";
        case B::Short: return t.is_unsigned ? "u16" : "i16";
        case B::Int:
        case B::Enum: return t.is_unsigned ? "u32" : "i32";
        case B::Long:
        case B::LongLong: return t.is_unsigned ? "u64" : "i64";
        case B::Float: return "f32";
        case B::Double:
        case B::LongDouble: return "f64";
        case B::Struct:
        case B::Union: return t.tag.empty() || t.tag[0] == '<' ? "T" : t.tag;
        case B::Void: return "()";
        case B::Unknown: return t.tag.empty() ? "T" : t.tag;
    }
    return "T";
}

namespace {

std::string zero_value(const CType& t) {
    if (t.base == CType::Base::Bool) return "false";
    if (t.is_floating()) return "0.0";
    if (t.base == CType::Base::Struct || t.base == CType::Base::Union || t.base == CType::Base::Unknown)
        return rust_type_name(t) + "::default()";
    return "0";
}

std::string source_text(std::string_view source, const SourceSpan& s) {
    return std::string(source.substr(s.begin.offset, s.length()));
}

// Best-effort rendering of a C expression in Rust syntax for suggestions.
std::string render_rust(const Node& n, std::string_view source);

std::string render_operand(const Node& child, const Node& parent, std::string_view source) {
    std::string r = render_rust(child, source);
    const int cp = rust_precedence(child);
    const int pp = rust_precedence(parent);
    if (cp < pp || (cp == pp && child.kind == NodeKind::Binary && child.text != parent.text) ||
        ((is_bitwise(child) || is_bitwise(parent)) && child.kind == NodeKind::Binary && child.text != parent.text))
        return "(" + r + ")";
    return r;
}

std::string render_index(const Node& index, std::string_view source) {
    if (index.kind == NodeKind::IntLiteral) return strip_integer_suffix(index.text);
    std::string r = render_rust(index, source);
    if (rust_precedence(index) < 10) r = "(" + r + ")";
    return r + " as usize";
}

std::string render_rust(const Node& n, std::string_view source) {
    switch (n.kind) {
        case NodeKind::Identifier: return n.text;
        case NodeKind::IntLiteral: return strip_integer_suffix(n.text);
        case NodeKind::FloatLiteral: {
            std::string t = n.text;
            if (!t.empty() && (t.back() == 'f' || t.back() == 'F' || t.back() == 'l' || t.back() == 'L'))
                t.pop_back();
            return t;
        }
        case NodeKind::CharLiteral: return "b" + n.text;
        case NodeKind::StringLiteral: return n.text;
        case NodeKind::Binary:
            return render_operand(n.children[0], n, source) + " " + n.text + " " +
                   render_operand(n.children[1], n, source);
        case NodeKind::Assign:
            return render_rust(n.children[0], source) + " " + n.text + " " + render_rust(n.children[1], source);
        case NodeKind::Cast: {
            const Node& operand = n.children[0];
            std::string r = render_rust(operand, source);
            if (rust_precedence(operand) < 12) r = "(" + r + ")";
            return r + " as " + rust_type_name(n.type);
        }
        case NodeKind::Subscript:
            return render_rust(n.children[0], source) + "[" + render_index(n.children[1], source) + "]";
        case NodeKind::Member: return render_rust(n.children[0], source) + "." + n.children[1].text;
        case NodeKind::Call: {
            std::string r = render_rust(n.children[0], source) + "(";
            for (std::size_t i = 1; i < n.children.size(); ++i) {
                if (i > 1) r += ", ";
                r += render_rust(n.children[i], source);
            }
            return r + ")";
        }
        case NodeKind::Unary:
            if (n.text == "++" || n.text == "--")
                return render_rust(n.children[0], source) + (n.text == "++" ? " += 1" : " -= 1");
            if (n.text == "&") return "&mut " + render_rust(n.children[0], source);
            return n.text + render_operand(n.children[0], n, source);
        case NodeKind::Postfix:
            return render_rust(n.children[0], source) + (n.text == "++" ? " += 1" : " -= 1");
        case NodeKind::Conditional:
            return "if " + render_rust(n.children[0], source) + " { " + render_rust(n.children[1], source) +
                   " } else { " + render_rust(n.children[2], source) + " }";
        case NodeKind::Sizeof:
            if (n.children.empty()) return "std::mem::size_of::<" + rust_type_name(n.type) + ">()";
            return "std::mem::size_of_val(&" + render_rust(n.children[0], source) + ")";
        default: return source_text(source, n.span);
    }
}

// Converts a printf-style format literal into a Rust format string.
std::string rust_format_string(std::string_view literal) {
    std::string out;
    std::string_view body = literal;
    if (body.size() >= 2 && body.front() == '"' && body.back() == '"') body = body.substr(1, body.size() - 2);
    for (std::size_t i = 0; i < body.size(); ++i) {
        const char c = body[i];
        if (c == '{' || c == '}') {
            out += c;
            out += c;
            continue;
        }
        if (c != '%') {
            out += c;
            continue;
        }
        if (i + 1 < body.size() && body[i + 1] == '%') {
            out += '%';
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        std::string precision;
        while (j < body.size() && one_of(std::string_view(&body[j], 1), {"-", "+", " ", "#", "0"})) ++j;
        while (j < body.size() && std::isdigit(static_cast<unsigned char>(body[j]))) ++j;
        if (j < body.size() && body[j] == '.') {
            std::size_t k = j + 1;
            while (k < body.size() && std::isdigit(static_cast<unsigned char>(body[k]))) ++k;
            precision = std::string(body.substr(j + 1, k - j - 1));
            j = k;
        }
        while (j < body.size() && one_of(std::string_view(&body[j], 1), {"h", "l", "L", "z", "j", "t", "q"})) ++j;
        out += precision.empty() ? "{}" : "{:." + precision + "}";
        i = j;
    }
    return out;
}

struct TypeScopes {
    std::vector<std::map<std::string, CType>> scopes{1};

    void push() { scopes.emplace_back(); }
    void pop() { scopes.pop_back(); }
    void declare(const std::string& name, const CType& type) {
        if (!name.empty()) scopes.back()[name] = type;
    }
    std::optional<CType> lookup(const std::string& name) const {
        for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return found->second;
        }
        return std::nullopt;
    }
};

class Detector {
public:
    explicit Detector(std::string_view source) : source_(source) {}

    std::vector<RuleHint> run(const Node& root) {
        visit(root);
        std::vector<RuleHint> out;
        out.reserve(hints_.size());
        for (auto& [key, hint] : hints_) out.push_back(std::move(hint));
        std::sort(out.begin(), out.end(), [](const RuleHint& a, const RuleHint& b) {
            return std::tuple(a.span_start, category_name(a.category), a.offset, a.snippet.size()) <
                   std::tuple(b.span_start, category_name(b.category), b.offset, b.snippet.size());
        });
        for (auto& h : out) h.description = h.snippet + " → " + h.suggested_rust;
        return out;
    }

private:
    using Key = std::tuple<int, std::size_t, std::size_t>;

    void add_hint(RuleCategory category, const SourceSpan& site, const std::string& suggestion) {
        Key key{static_cast<int>(category), site.begin.offset, site.length()};
        auto it = hints_.find(key);
        if (it != hints_.end()) {
            if (it->second.suggested_rust.find(suggestion) == std::string::npos)
                it->second.suggested_rust += "\n" + suggestion;
            return;
        }
        RuleHint h;
        h.category = category;
        h.snippet = source_text(source_, site);
        h.suggested_rust = suggestion;
        h.span_start = site.begin.line;
        h.span_end = std::max(site.begin.line, site.end.line);
        h.offset = site.begin.offset;
        hints_.emplace(key, std::move(h));
    }

    // ---- expression typing --------------------------------------------

    std::optional<CType> type_of(const Node& e) const {
        switch (e.kind) {
            case NodeKind::Identifier: {
                auto t = scopes_.lookup(e.text);
                if (t) return t;
                return std::nullopt;
            }
            case NodeKind::IntLiteral: {
                // Unsuffixed literals adapt to context; suffixes declare a width.
                std::string_view text = e.text;
                int longs = 0;
                bool is_unsigned = false;
                while (!text.empty() && one_of(text.substr(text.size() - 1), {"u", "U", "l", "L"})) {
                    if (text.back() == 'u' || text.back() == 'U') is_unsigned = true;
                    else ++longs;
                    text.remove_suffix(1);
                }
                if (longs == 0 && !is_unsigned) return std::nullopt;
                CType t;
                t.base = longs >= 2 ? CType::Base::LongLong : longs == 1 ? CType::Base::Long : CType::Base::Int;
                t.is_unsigned = is_unsigned;
                return t;
            }
            case NodeKind::Subscript: {
                auto t = type_of(e.children[0]);
                if (!t) return std::nullopt;
                if (t->is_array()) {
                    t->dims.erase(t->dims.begin());
                    if (!t->dim_text.empty()) t->dim_text.erase(t->dim_text.begin());
                } else if (t->is_pointer()) {
                    --t->pointer_depth;
                } else {
                    return std::nullopt;
                }
                return t;
            }
            case NodeKind::Member: {
                auto t = type_of(e.children[0]);
                if (!t) return std::nullopt;
                auto s = structs_.find(t->tag);
                if (s == structs_.end()) return std::nullopt;
                auto f = s->second.find(e.children[1].text);
                if (f == s->second.end()) return std::nullopt;
                return f->second;
            }
            case NodeKind::Unary: {
                if (e.text == "!") return std::nullopt;
                auto t = type_of(e.children[0]);
                if (!t) return std::nullopt;
                if (e.text == "*") {
                    if (t->is_array()) {
                        t->dims.erase(t->dims.begin());
                        if (!t->dim_text.empty()) t->dim_text.erase(t->dim_text.begin());
                    } else if (t->is_pointer()) {
                        --t->pointer_depth;
                    } else {
                        return std::nullopt;
                    }
                } else if (e.text == "&") {
                    ++t->pointer_depth;
                }
                return t;
            }
            case NodeKind::Postfix: return type_of(e.children[0]);
            case NodeKind::Cast: return e.type;
            case NodeKind::Assign: return type_of(e.children[0]);
            case NodeKind::Comma: return type_of(e.children[1]);
            case NodeKind::Conditional: {
                auto t = type_of(e.children[1]);
                return t ? t : type_of(e.children[2]);
            }
            case NodeKind::Call: {
                const std::string name = callee_name(e);
                auto f = functions_.find(name);
                if (f != functions_.end()) return f->second;
                return std::nullopt;
            }
            case NodeKind::Binary: {
                const std::string& op = e.text;
                if (one_of(op, {"==", "!=", "<", ">", "<=", ">=", "&&", "||"})) return std::nullopt;
                auto l = type_of(e.children[0]);
                if (op == "<<" || op == ">>") return promote(l);
                auto r = type_of(e.children[1]);
                if (!l) return promote(r);
                if (!r) return promote(l);
                if (l->is_pointer() || l->is_array()) return l;
                if (r->is_pointer() || r->is_array()) return r;
                if (l->is_floating() || r->is_floating()) {
                    if (!r->is_floating()) return l;
                    if (!l->is_floating()) return r;
                    return l->base >= r->base ? l : r;
                }
                if (l->is_scalar_integer() && r->is_scalar_integer()) return promote(wider(*l, *r));
                return std::nullopt;
            }
            default: return std::nullopt;
        }
    }

    static CType wider(const CType& a, const CType& b) {
        if (a.integer_rank() != b.integer_rank()) return a.integer_rank() > b.integer_rank() ? a : b;
        return a.is_unsigned ? a : b;
    }

    static std::optional<CType> promote(std::optional<CType> t) {
        if (t && t->is_scalar_integer() && t->integer_rank() < 3) {
            t->base = CType::Base::Int;
            t->is_unsigned = false;
            t->explicit_signed = false;
        }
        return t;
    }

    static bool mixed_widths(const CType& a, const CType& b) {
        return a.integer_rank() != b.integer_rank() || a.is_unsigned != b.is_unsigned;
    }

    // ---- traversal -------------------------------------------------------

    void visit_children(const Node& n) {
        ancestors_.push_back(&n);
        for (const auto& c : n.children) visit(c);
        ancestors_.pop_back();
    }

    void visit(const Node& n) {
        switch (n.kind) {
            case NodeKind::FunctionDef: {
                CType ret = n.type;
                ret.is_function = false;
                functions_[n.text] = ret;
                scopes_.push();
                ancestors_.push_back(&n);
                for (const auto& c : n.children) {
                    if (c.kind == NodeKind::Declarator) handle_declarator(c, c);
                    else visit(c);
                }
                ancestors_.pop_back();
                scopes_.pop();
                return;
            }
            case NodeKind::Compound:
            case NodeKind::For:
                scopes_.push();
                visit_children(n);
                scopes_.pop();
                return;
            case NodeKind::StructDef: {
                auto& fields = structs_[n.text];
                for (const auto& member : n.children)
                    for (const auto& d : member.children)
                        if (d.kind == NodeKind::Declarator) fields[d.text] = d.type;
                ++struct_depth_;
                visit_children(n);
                --struct_depth_;
                return;
            }
            case NodeKind::Declaration: {
                ancestors_.push_back(&n);
                for (const auto& c : n.children) {
                    if (c.kind == NodeKind::Declarator) handle_declarator(c, n);
                    else visit(c);
                }
                ancestors_.pop_back();
                return;
            }
            case NodeKind::Call: check_call(n); break;
            case NodeKind::Binary: check_binary(n); break;
            case NodeKind::Assign: check_compound_assign(n); break;
            case NodeKind::Cast: check_cast(n); break;
            case NodeKind::Subscript: check_subscript(n); break;
            default: break;
        }
        visit_children(n);
    }

    void handle_declarator(const Node& d, const Node& site) {
        if (struct_depth_ == 0 && !d.type.is_function) scopes_.declare(d.text, d.type);
        if (d.type.is_function) {
            CType ret = d.type;
            ret.is_function = false;
            functions_[d.text] = ret;
        }

        ancestors_.push_back(&d);
        for (const auto& c : d.children) visit(c);
        ancestors_.pop_back();

        if (d.type.is_function) return;
        if (d.type.is_pointer()) {
            PointerSite ps;
            ps.declarator = &d;
            ps.target = d.text;
            ps.target_type = d.type;
            if (!d.children.empty()) ps.call = find_alloc_call(d.children[0]);
            add_hint(RuleCategory::Pointers, site.span, infer_pointer_suggestion(ps, source_));
        }
        if (d.type.is_array()) add_hint(RuleCategory::Array, site.span, array_suggestion(d));
    }

    static const Node* find_alloc_call(const Node& e) {
        if (e.kind == NodeKind::Call && is_alloc_function(callee_name(e)) && callee_name(e) != "free") return &e;
        for (const auto& c : e.children)
            if (const Node* found = find_alloc_call(c)) return found;
        return nullptr;
    }

    // Innermost declaration or simple statement holding the current node;
    // nullptr when the node sits directly in a compound/control statement.
    const Node* enclosing_site() const {
        for (auto it = ancestors_.rbegin(); it != ancestors_.rend(); ++it) {
            const NodeKind k = (*it)->kind;
            if (k == NodeKind::Declaration || k == NodeKind::ExprStmt || k == NodeKind::Return) return *it;
            if (k == NodeKind::Declarator && (*it)->children.empty()) return *it;  // parameter
            if (is_statement(k)) return nullptr;
        }
        return nullptr;
    }

    const Node* nearest(NodeKind kind) const {
        for (auto it = ancestors_.rbegin(); it != ancestors_.rend(); ++it) {
            if ((*it)->kind == kind) return *it;
            if (is_statement((*it)->kind) && (*it)->kind != kind) return nullptr;
        }
        return nullptr;
    }

    void check_call(const Node& call) {
        const std::string name = callee_name(call);
        if (is_alloc_function(name)) {
            const Node* site = enclosing_site();
            PointerSite ps;
            ps.call = &call;
            if (const Node* d = nearest(NodeKind::Declarator); d && site && site->kind == NodeKind::Declaration) {
                ps.declarator = d;
                ps.target = d->text;
                ps.target_type = d->type;
            } else if (const Node* assign = nearest(NodeKind::Assign)) {
                ps.target = render_rust(assign->children[0], source_);
                ps.target_type = type_of(assign->children[0]);
            } else if (name == "free" && call.children.size() > 1) {
                ps.target = render_rust(call.children[1], source_);
            }
            add_hint(RuleCategory::Pointers, site ? site->span : call.span, infer_pointer_suggestion(ps, source_));
        }
        if (is_io_function(name)) {
            const Node* site = enclosing_site();
            add_hint(RuleCategory::IO, site ? site->span : call.span, io_suggestion(call, name));
        }
    }

    void check_binary(const Node& b) {
        if (!one_of(b.text, {"+", "-", "*", "/", "%"})) return;
        auto l = type_of(b.children[0]);
        auto r = type_of(b.children[1]);
        if (!l || !r || !l->is_scalar_integer() || !r->is_scalar_integer() || !mixed_widths(*l, *r)) return;
        const CType common = promote(wider(*l, *r)).value();
        add_hint(RuleCategory::Mixtype, b.span, mixtype_suggestion(b, *l, *r, common));
    }

    void check_compound_assign(const Node& a) {
        if (!one_of(a.text, {"+=", "-=", "*=", "/=", "%="})) return;
        auto l = type_of(a.children[0]);
        auto r = type_of(a.children[1]);
        if (!l || !r || !l->is_scalar_integer() || !r->is_scalar_integer() || !mixed_widths(*l, *r)) return;
        const CType common = promote(wider(*l, *r)).value();
        const std::string ty = rust_type_name(common);
        std::string lhs = render_rust(a.children[0], source_);
        std::string rhs = render_rust(a.children[1], source_);
        if (rust_precedence(a.children[1]) < 12) rhs = "(" + rhs + ")";
        std::string suggestion = "Cast mixed-width integers to a common type like " + ty + ": ";
        if (rust_type_name(*l) == ty)
            suggestion += lhs + " " + a.text + " " + rhs + " as " + ty + ";";
        else
            suggestion += "declare `" + lhs + "` as " + ty + " and write " + lhs + " " + a.text + " " + rhs +
                          (rust_type_name(*r) == ty ? "" : " as " + ty) + ";";
        add_hint(RuleCategory::Mixtype, a.span, suggestion);
    }

    void check_cast(const Node& c) {
        if (!c.type.is_scalar_integer()) return;
        auto operand = type_of(c.children[0]);
        int from_rank = 3;  // unresolved operands are treated as int
        if (operand) {
            if (!operand->is_scalar_integer()) return;
            from_rank = promote(operand)->integer_rank();
        }
        if (c.type.integer_rank() <= from_rank) return;
        add_hint(RuleCategory::Mixtype, c.span,
                 "Cast mixed-width integers to a common type like " + rust_type_name(c.type) + ": " +
                     render_rust(c, source_));
    }

    void check_subscript(const Node& s) {
        if (!ancestors_.empty()) {
            const Node* parent = ancestors_.back();
            if (parent->kind == NodeKind::Subscript && &parent->children[0] == &s) return;  // inner link
        }
        bool needs_hint = false;
        for (const Node* link = &s; link->kind == NodeKind::Subscript; link = &link->children[0])
            if (link->children[1].kind != NodeKind::IntLiteral) needs_hint = true;
        if (!needs_hint) return;
        add_hint(RuleCategory::Array, s.span, "Cast array indices to usize: " + render_rust(s, source_));
    }

    // ---- suggestion builders ------------------------------------------------

    std::string mixtype_suggestion(const Node& b, const CType& l, const CType& r, const CType& common) const {
        const std::string ty = rust_type_name(common);
        auto side = [&](const Node& operand, const CType& t) {
            std::string text = render_rust(operand, source_);
            if (rust_type_name(t) == ty) {
                if (rust_precedence(operand) < rust_precedence(b)) text = "(" + text + ")";
                return text;
            }
            if (rust_precedence(operand) < 10) text = "(" + text + ")";
            return text + " as " + ty;
        };
        return "Cast mixed-width integers to a common type like " + ty + ": " + side(b.children[0], l) + " " +
               b.text + " " + side(b.children[1], r);
    }

    static std::string array_suggestion(const Node& d) {
        CType element = d.type;
        element.dims.clear();
        element.dim_text.clear();
        const std::string ty = element.is_pointer() ? "Vec<" + rust_type_name(element) + ">" : rust_type_name(element);
        const std::string zero = element.is_pointer() ? "Vec::new()" : zero_value(element);
        const auto& dims = d.type.dims;

        const bool param_like = d.children.empty() && std::any_of(dims.begin(), dims.end(), [&](const auto& x) {
            return !x.has_value();
        }) && d.type.dim_text.front().empty();
        if (param_like) return "Pass the array as a slice: `" + d.text + ": &mut [" + ty + "]`";

        bool all_constant = true;
        long long total = 1;
        for (const auto& dim : dims) {
            if (!dim) {
                all_constant = false;
                break;
            }
            total *= std::max(1LL, *dim);
        }
        std::string init = zero;
        std::string type = ty;
        if (all_constant && total <= 100000) {
            for (auto it = dims.rbegin(); it != dims.rend(); ++it) {
                init = "[" + init + "; " + std::to_string(**it) + "]";
                type = "[" + type + "; " + std::to_string(**it) + "]";
            }
            return "Use [[T; M]; N] for fixed-size arrays and cast indices to usize: let mut " + d.text + ": " +
                   type + " = " + init + ";";
        }
        for (std::size_t i = dims.size(); i-- > 0;) {
            const std::string len = dims[i] ? std::to_string(*dims[i]) : d.type.dim_text[i];
            init = "vec![" + init + "; " + len + "]";
        }
        return "Use a heap-allocated Vec for large or variable-length arrays and cast indices to usize: let mut " +
               d.text + " = " + init + ";";
    }

    std::string io_suggestion(const Node& call, const std::string& name) const {
        if (name == "scanf" || name == "fscanf") {
            std::string s =
                "let mut input = String::new();\n"
                "io::stdin().read_to_string(&mut input).unwrap();\n"
                "let mut parts = input.split_whitespace();";
            const std::size_t first_arg = name == "scanf" ? 2 : 3;
            for (std::size_t i = first_arg; i < call.children.size(); ++i) {
                const Node& arg = call.children[i];
                const Node& target =
                    arg.kind == NodeKind::Unary && arg.text == "&" ? arg.children[0] : arg;
                auto t = type_of(target);
                std::string ty = "_";
                if (t && t->is_array() && t->base == CType::Base::Char) ty = "String";
                else if (t && !t->is_pointer() && !t->is_array()) ty = rust_type_name(*t);
                if (target.kind == NodeKind::Identifier)
                    s += "\nlet " + target.text + ": " + ty + " = parts.next().unwrap().parse().unwrap();";
                else
                    s += "\n" + render_rust(target, source_) + " = parts.next().unwrap().parse().unwrap();";
            }
            return s;
        }
        if (name == "printf" || name == "fprintf") {
            const std::size_t fmt_index = name == "printf" ? 1 : 2;
            if (call.children.size() <= fmt_index || call.children[fmt_index].kind != NodeKind::StringLiteral)
                return "Use print!/println! with {} placeholders instead of printf";
            std::string fmt = rust_format_string(call.children[fmt_index].text);
            std::string macro = "print!";
            if (fmt.size() >= 2 && fmt.compare(fmt.size() - 2, 2, "\\n") == 0 &&
                fmt.find("\\n") == fmt.size() - 2) {
                fmt.resize(fmt.size() - 2);
                macro = "println!";
            }
            std::string s = macro + "(\"" + fmt + "\"";
            for (std::size_t i = fmt_index + 1; i < call.children.size(); ++i)
                s += ", " + render_rust(call.children[i], source_);
            return s + ");";
        }
        if (name == "getchar")
            return "let mut bytes = io::stdin().lock().bytes(); // bytes.next() yields None at EOF instead of EOF";
        if (name == "gets" || name == "fgets")
            return "let mut line = String::new();\nio::stdin().read_line(&mut line).unwrap();";
        if (name == "puts") {
            std::string arg = call.children.size() > 1 ? render_rust(call.children[1], source_) : "s";
            return "println!(\"{}\", " + arg + ");";
        }
        if (name == "putchar") {
            if (call.children.size() > 1 && call.children[1].kind == NodeKind::CharLiteral)
                return "print!(\"{}\", " + call.children[1].text + ");";
            std::string arg = call.children.size() > 1 ? render_rust(call.children[1], source_) : "c";
            return "print!(\"{}\", (" + arg + ") as u8 as char);";
        }
        return "Use std::io instead of C stdio";
    }

    std::string_view source_;
    std::map<Key, RuleHint> hints_;
    TypeScopes scopes_;
    std::map<std::string, std::map<std::string, CType>> structs_;
    std::map<std::string, CType> functions_;
    std::vector<const Node*> ancestors_;
    int struct_depth_ = 0;
};

// sizeof(T) / sizeof(expr) operand type, when resolvable.
std::optional<CType> sizeof_type(const Node& e) {
    if (e.kind != NodeKind::Sizeof) return std::nullopt;
    if (e.children.empty()) return e.type;
    return std::nullopt;
}

}  // namespace

std::string infer_pointer_suggestion(const PointerSite& site, std::string_view source) {
    const std::string name = site.target.empty() ? "p" : site.target;
    std::optional<CType> pointee;
    if (site.target_type && site.target_type->is_pointer()) {
        pointee = *site.target_type;
        --pointee->pointer_depth;
    }

    if (site.call) {
        const std::string fn = callee_name(*site.call);
        const auto& args = site.call->children;
        if (fn == "free") {
            const std::string freed = args.size() > 1 ? render_rust(args[1], source) : name;
            return "// free(" + freed + ") has no Rust counterpart: ownership drops `" + freed +
                   "` automatically when it goes out of scope (use drop(" + freed + ") to release early)";
        }
        if (fn == "malloc" && args.size() > 1) {
            const Node& size = args[1];
            if (auto t = sizeof_type(size)) {
                if (t->base == CType::Base::Struct && !t->is_pointer())
                    return "let " + name + " = Box::new(" + rust_type_name(*t) + "::default());";
                return "let " + name + " = Box::new(" + zero_value(*t) + ");";
            }
            if (size.kind == NodeKind::Binary && size.text == "*") {
                const Node& a = size.children[0];
                const Node& b = size.children[1];
                const Node* count = a.kind == NodeKind::Sizeof ? &b : b.kind == NodeKind::Sizeof ? &a : nullptr;
                const Node* elem = count == &b ? &a : &b;
                if (count) {
                    auto t = sizeof_type(*elem);
                    const std::string ty = t ? rust_type_name(*t) : pointee ? rust_type_name(*pointee) : "T";
                    return "let mut " + name + ": Vec<" + ty + "> = Vec::with_capacity(" +
                           render_rust(*count, source) + ");";
                }
            }
        }
        if (fn == "calloc" && args.size() > 2) {
            auto t = sizeof_type(args[2]);
            const std::string ty = t ? rust_type_name(*t) : pointee ? rust_type_name(*pointee) : "T";
            return "let mut " + name + ": Vec<" + ty + "> = Vec::with_capacity(" + render_rust(args[1], source) +
                   "); // calloc zero-fills: vec![" + (t ? zero_value(*t) : "0") + "; " +
                   render_rust(args[1], source) + "]";
        }
        if (fn == "realloc")
            return "Grow the Vec in place instead of realloc: " + name + ".resize(new_len, Default::default());";
    }

    if (site.declarator && pointee && pointee->base != CType::Base::Void) {
        if (pointee->base == CType::Base::Char && !pointee->is_pointer())
            return "Use &str or String instead of the raw pointer `char *" + name + "`";
        if (pointee->base == CType::Base::Struct && !pointee->is_pointer())
            return "Use Option<Box<" + rust_type_name(*pointee) + ">> (owned) or &" + rust_type_name(*pointee) +
                   " (borrowed) instead of the raw pointer `" + name + "`";
        return "Use a reference (&" + rust_type_name(*pointee) + " / &mut [" + rust_type_name(*pointee) +
               "]) or Box<" + rust_type_name(*pointee) + "> instead of the raw pointer `" + name + "`";
    }
    return "Replace the raw pointer with an owned type (Box<T>, Vec<T>) or a borrowed reference (&T, &mut T)";
}

std::vector<RuleHint> detect_rules(const CAst& ast, std::string_view source) {
    return Detector(source).run(ast.root);
}

std::vector<RuleHint> analyze_source(std::string_view source) { return detect_rules(parse_c(source), source); }

CategorySet categories_of(std::span<const RuleHint> hints) {
    CategorySet out;
    for (const auto& h : hints) out.insert(h.category);
    return out;
}

nlohmann::json hint_to_json(const RuleHint& h) {
    nlohmann::json j;
    j["category"] = std::string(category_name(h.category));
    j["snippet"] = h.snippet;
    j["suggested_rust"] = h.suggested_rust;
    j["description"] = h.description;
    j["span_start"] = h.span_start;
    j["span_end"] = h.span_end;
    return j;
}

std::string hints_to_json_text(std::span<const RuleHint> hints) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& h : hints) arr.push_back(hint_to_json(h));
    return arr.dump(2);
}

}  // namespace c2r::rules
