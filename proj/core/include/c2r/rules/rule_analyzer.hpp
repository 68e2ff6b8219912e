#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "c2r/rules/c_ast.hpp"

namespace c2r::rules {

enum class RuleCategory { Pointers, IO, Mixtype, Array };

inline constexpr std::array<RuleCategory, 4> kAllCategories = {
    RuleCategory::Pointers, RuleCategory::IO, RuleCategory::Mixtype, RuleCategory::Array};

std::string_view category_name(RuleCategory category);
std::optional<RuleCategory> parse_category(std::string_view name);

using CategorySet = std::set<RuleCategory>;

// One detected site that needs a Rust-specific idiom.
struct RuleHint {
    RuleCategory category = RuleCategory::Pointers;
    std::string snippet;         // exact source fragment
    std::string suggested_rust;  // recommended target form
    std::string description;     // snippet + " → " + suggested_rust
    int span_start = 1;          // 1-based lines, inclusive
    int span_end = 1;
    std::size_t offset = 0;  // byte offset of snippet in the analyzed source

    friend bool operator==(const RuleHint&, const RuleHint&) = default;
};

// Walks the AST and returns one hint per detected site, ordered by
// span_start, then category name, then byte offset.
std::vector<RuleHint> detect_rules(const CAst& ast, std::string_view source);

// parse_c followed by detect_rules. Throws ParseError.
std::vector<RuleHint> analyze_source(std::string_view source);

// A pointer-related site: an allocation/free call and/or the pointer
// declarator it belongs to.
struct PointerSite {
    const Node* call = nullptr;        // malloc/calloc/realloc/free
    const Node* declarator = nullptr;  // enclosing pointer declarator
    std::string target;                // variable receiving the allocation
    std::optional<CType> target_type;  // its declared type, when known
};

// Suggested Rust for a pointer site; never fails (falls back to generic
// ownership guidance).
std::string infer_pointer_suggestion(const PointerSite& site, std::string_view source);

CategorySet categories_of(std::span<const RuleHint> hints);

// Rust spelling of a scalar C type (int -> i32, long long -> i64, ...).
std::string rust_type_name(const CType& type);

nlohmann::json hint_to_json(const RuleHint& hint);
std::string hints_to_json_text(std::span<const RuleHint> hints);

}  // namespace c2r::rules
