#include "c2r/rules/c_ast.hpp"

namespace c2r::rules {

bool CType::is_scalar_integer() const {
    return !is_array() && !is_pointer() && !is_function && integer_rank() >= 0;
}

bool CType::is_floating() const {
    return !is_array() && !is_pointer() &&
           (base == Base::Float || base == Base::Double || base == Base::LongDouble);
}

int CType::integer_rank() const {
    switch (base) {
        case Base::Bool: return 0;
        case Base::Char: return 1;
        case Base::Short: return 2;
        case Base::Int:
        case Base::Enum: return 3;
        case Base::Long: return 4;
        case Base::LongLong: return 5;
        default: return -1;
    }
}

std::string CType::spelling() const {
    std::string s = is_unsigned ? "unsigned " : "";
    switch (base) {
        case Base::Unknown: s += tag.empty() ? "?" : tag; break;
        case Base::Void: s += "void"; break;
        case Base::Bool: s += "_Bool"; break;
        case Base::Char: s += "char"; break;
        case Base::Short: s += "short"; break;
        case Base::Int: s += "int"; break;
        case Base::Long: s += "long"; break;
        case Base::LongLong: s += "long long"; break;
        case Base::Float: s += "float"; break;
        case Base::Double: s += "double"; break;
        case Base::LongDouble: s += "long double"; break;
        case Base::Struct: s += "struct " + tag; break;
        case Base::Union: s += "union " + tag; break;
        case Base::Enum: s += "enum " + tag; break;
    }
    s += std::string(static_cast<std::size_t>(pointer_depth), '*');
    for (const auto& d : dims) s += d ? "[" + std::to_string(*d) + "]" : "[]";
    return s;
}

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::TranslationUnit: return "TranslationUnit";
        case NodeKind::FunctionDef: return "FunctionDef";
        case NodeKind::Declaration: return "Declaration";
        case NodeKind::Declarator: return "Declarator";
        case NodeKind::StructDef: return "StructDef";
        case NodeKind::TypeName: return "TypeName";
        case NodeKind::Compound: return "Compound";
        case NodeKind::ExprStmt: return "ExprStmt";
        case NodeKind::If: return "If";
        case NodeKind::While: return "While";
        case NodeKind::DoWhile: return "DoWhile";
        case NodeKind::For: return "For";
        case NodeKind::Switch: return "Switch";
        case NodeKind::Case: return "Case";
        case NodeKind::Default: return "Default";
        case NodeKind::Label: return "Label";
        case NodeKind::Goto: return "Goto";
        case NodeKind::Break: return "Break";
        case NodeKind::Continue: return "Continue";
        case NodeKind::Return: return "Return";
        case NodeKind::Empty: return "Empty";
        case NodeKind::Opaque: return "Opaque";
        case NodeKind::Call: return "Call";
        case NodeKind::Binary: return "Binary";
        case NodeKind::Assign: return "Assign";
        case NodeKind::Unary: return "Unary";
        case NodeKind::Postfix: return "Postfix";
        case NodeKind::Cast: return "Cast";
        case NodeKind::Subscript: return "Subscript";
        case NodeKind::Member: return "Member";
        case NodeKind::Conditional: return "Conditional";
        case NodeKind::Comma: return "Comma";
        case NodeKind::Sizeof: return "Sizeof";
        case NodeKind::InitList: return "InitList";
        case NodeKind::CompoundLiteral: return "CompoundLiteral";
        case NodeKind::Identifier: return "Identifier";
        case NodeKind::IntLiteral: return "IntLiteral";
        case NodeKind::FloatLiteral: return "FloatLiteral";
        case NodeKind::CharLiteral: return "CharLiteral";
        case NodeKind::StringLiteral: return "StringLiteral";
    }
    return "?";
}

}  // namespace c2r::rules
