#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "c2r/corpus/corpus.hpp"
#include "c2r/llm/gateway.hpp"
#include "c2r/rules/rule_analyzer.hpp"
#include "c2r/summarizer/summarizer.hpp"
#include "c2r/translator/job.hpp"

namespace c2r::translator {

enum class PromptMode { Instruction, ICL, RAG, Irene };

std::string_view mode_name(PromptMode mode);
// Case-insensitive. Throws ConfigError.
PromptMode parse_mode(std::string_view name);

inline constexpr std::string_view kInstructionSentence = "Translate the following C code to Rust.";
inline constexpr std::string_view kSystemInstruction =
    "You are an expert in C and Rust. Produce a complete, safe Rust program with the same observable "
    "behavior as the given C program. Reply with the full program in a single ```rust code block.";
inline constexpr std::string_view kHintsHeader = "### Rule hints";
inline constexpr std::string_view kDemosHeader = "### Demonstrations";
inline constexpr std::string_view kCodeHeader = "### C code";
inline constexpr std::string_view kSummaryHeader = "### Structured summary";

struct ComposedPrompt {
    std::string system_text;
    std::string user_text;
    std::optional<std::string> hints;  // each section as it appears in user_text
    std::optional<std::string> demos;
    std::optional<std::string> code;
    std::optional<std::string> summary;
};

std::string render_hints(std::span<const rules::RuleHint> hints);
std::string render_demos(std::span<const corpus::DemoExample> demos);

// Instruction mode ignores hints, demos and summary; ICL and RAG ignore
// hints and summary. Empty hint or demo lists leave their section out.
ComposedPrompt compose_prompt(PromptMode mode, std::string_view c_code, std::span<const rules::RuleHint> hints,
                              std::span<const corpus::DemoExample> demos,
                              const std::optional<summarizer::StructuredSummary>& summary);

struct TranslatorConfig {
    PromptMode mode = PromptMode::Irene;
    std::size_t k = 1;
    double threshold = 100.0;
    std::size_t icl_examples = 4;
    std::uint64_t seed = 0;
    std::string model_name;
    int max_tokens = 4096;
    double temperature = 0.0;
    double top_p = 1.0;
    summarizer::SummaryOptions summary;
    // Optional separate gateway for summaries (e.g. a stronger model).
    const llm::Gateway* summary_gateway = nullptr;
};

// Everything needed to replay one translation offline.
struct TranslationAudit {
    PromptMode mode = PromptMode::Irene;
    PromptMode effective_mode = PromptMode::Irene;
    std::vector<std::string> warnings;
    std::vector<rules::RuleHint> hints;
    std::vector<std::string> demo_ids;
    std::optional<summarizer::SummaryExchange> summary;
    ComposedPrompt prompt;
    llm::GenerationRequest request;
    std::string raw_reply;
    std::string rust_code;
};

nlohmann::json to_json(const TranslationAudit& audit);

// Random demonstrations for ICL: partial Fisher-Yates over the corpus with a
// generator seeded from (seed, job id).
std::vector<corpus::DemoExample> sample_demos(const corpus::CorpusIndex& index, std::size_t count,
                                              std::uint64_t seed, std::string_view job_id);

// Analysis, retrieval and summarization as the mode needs, then one
// generation. `index` may be null; retrieval modes then run without demos.
// Analyzer failures downgrade to an Instruction prompt. Gateway errors
// propagate.
TranslationAudit translate_once(const llm::Gateway& gateway, const corpus::CorpusIndex* index,
                                const TranslationJob& job, const TranslatorConfig& config);

}  // namespace c2r::translator
