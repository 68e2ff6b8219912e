#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace c2r::rules {

struct SourcePos {
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    std::size_t offset = 0;

    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

// [begin, end) in byte offsets; end.line/end.column refer to the last
// character covered.
struct SourceSpan {
    SourcePos begin;
    SourcePos end;

    std::size_t length() const { return end.offset - begin.offset; }
    bool contains(const SourceSpan& other) const {
        return begin.offset <= other.begin.offset && other.end.offset <= end.offset;
    }
    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct CType {
    enum class Base {
        Unknown,  // unresolved type name (e.g. a stripped macro)
        Void,
        Bool,
        Char,
        Short,
        Int,
        Long,
        LongLong,
        Float,
        Double,
        LongDouble,
        Struct,
        Union,
        Enum,
    };

    Base base = Base::Int;
    bool is_unsigned = false;
    bool explicit_signed = false;
    std::string tag;  // struct/union/enum tag or unresolved type name
    int pointer_depth = 0;
    // Array dimensions, outermost first. nullopt: empty or non-constant.
    std::vector<std::optional<long long>> dims;
    std::vector<std::string> dim_text;  // source text of each dimension
    bool is_function = false;

    bool is_array() const { return !dims.empty(); }
    bool is_pointer() const { return pointer_depth > 0; }
    bool is_scalar_integer() const;
    bool is_floating() const;
    // char < short < int < long < long long; -1 for non-integers.
    int integer_rank() const;
    std::string spelling() const;

    friend bool operator==(const CType&, const CType&) = default;
};

enum class NodeKind {
    TranslationUnit,
    FunctionDef,
    Declaration,
    Declarator,
    StructDef,
    TypeName,
    Compound,
    ExprStmt,
    If,
    While,
    DoWhile,
    For,
    Switch,
    Case,
    Default,
    Label,
    Goto,
    Break,
    Continue,
    Return,
    Empty,
    Opaque,
    Call,
    Binary,
    Assign,
    Unary,
    Postfix,
    Cast,
    Subscript,
    Member,
    Conditional,
    Comma,
    Sizeof,
    InitList,
    CompoundLiteral,
    Identifier,
    IntLiteral,
    FloatLiteral,
    CharLiteral,
    StringLiteral,
};

const char* to_string(NodeKind kind);

// Child layout by kind:
//   FunctionDef      text=name, type=return type; children: param Declarators..., Compound
//   Declaration      type=specifier type; children: [StructDef] Declarator...
//   Declarator       text=name, type=full declared type; children: [initializer]
//   StructDef        text=tag; children: member Declarations
//   Call             children: callee, args...
//   Binary/Assign    text=operator; children: lhs, rhs
//   Unary/Postfix    text=operator; children: operand
//   Cast             type=target; children: operand
//   Subscript        children: base, index
//   Member           text="." or "->"; children: base, Identifier(field)
//   Conditional      children: cond, then, else
//   Sizeof           children: [operand]; type set when applied to a type name
//   For              children: init, cond, step, body (Empty for missing parts)
//   If               children: cond, then, [else]
//   While/Switch     children: cond, body
//   DoWhile          children: body, cond
//   Opaque           text=raw source of the unparsed region
struct Node {
    NodeKind kind = NodeKind::Opaque;
    SourceSpan span;
    std::string text;
    CType type;
    std::vector<Node> children;
};

struct CAst {
    Node root;
    std::size_t opaque_count = 0;
};

// Depth-first, pre-order visit. The callback receives the node and its
// ancestor chain (outermost first, not including the node itself).
template <typename Fn>
void walk(const Node& node, Fn&& fn, std::vector<const Node*>& ancestors) {
    fn(node, ancestors);
    ancestors.push_back(&node);
    for (const auto& child : node.children) walk(child, fn, ancestors);
    ancestors.pop_back();
}

template <typename Fn>
void walk(const Node& node, Fn&& fn) {
    std::vector<const Node*> ancestors;
    walk(node, fn, ancestors);
}

}  // namespace c2r::rules
