#pragma once

#include <string>
#include <string_view>

#include "c2r/llm/gateway.hpp"

namespace c2r::summarizer {

struct StructuredSummary {
    std::string input_desc;
    std::string output_desc;
    std::string functionality;  // raw model text when !well_formed
    bool well_formed = false;

    friend bool operator==(const StructuredSummary&, const StructuredSummary&) = default;
};

// The bundled prompt; {{c_code}} marks where the source goes.
std::string_view default_template();

std::string build_summary_prompt(std::string_view c_code, std::string_view prompt_template = default_template());

// Labels "Input:", "Output:", "Functionality:" matched case-insensitively at
// line starts (leading whitespace and markdown emphasis are ignored).
StructuredSummary parse_summary(std::string_view text);

std::string render_summary(const StructuredSummary& summary);

struct SummaryOptions {
    std::string prompt_template;  // empty: default_template()
    int max_tokens = 4096;
    std::string model_name;       // empty: the gateway's model
};

// One summarization round trip, kept whole for auditing.
struct SummaryExchange {
    llm::GenerationRequest request;
    std::string reply;
    StructuredSummary summary;
};

// Throws std::invalid_argument on empty c_code; propagates gateway errors.
SummaryExchange summarize_exchange(const llm::Gateway& gateway, std::string_view c_code,
                                   const SummaryOptions& options = {});

inline StructuredSummary summarize(const llm::Gateway& gateway, std::string_view c_code,
                                   const SummaryOptions& options = {}) {
    return summarize_exchange(gateway, c_code, options).summary;
}

}  // namespace c2r::summarizer
