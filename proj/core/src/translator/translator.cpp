#include "c2r/translator/translator.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "c2r/error.hpp"
#include "c2r/util/files.hpp"

namespace c2r::translator {

std::string_view mode_name(PromptMode mode) {
    switch (mode) {
        case PromptMode::Instruction: return "instruction";
        case PromptMode::ICL: return "icl";
        case PromptMode::RAG: return "rag";
        case PromptMode::Irene: return "irene";
    }
    return "?";
}

PromptMode parse_mode(std::string_view name) {
    std::string lower;
    for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (auto m : {PromptMode::Instruction, PromptMode::ICL, PromptMode::RAG, PromptMode::Irene})
        if (mode_name(m) == lower) return m;
    throw ConfigError("unknown prompt mode: " + std::string(name));
}

namespace {

std::string fenced(std::string_view lang, std::string_view code) {
    std::string out = "```";
    out += lang;
    out += '\n';
    out += code;
    if (out.back() != '\n') out += '\n';
    out += "```";
    return out;
}

std::string one_line(std::string_view s) {
    std::string out;
    bool space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
            continue;
        }
        if (space) out += ' ';
        space = false;
        out += c;
    }
    return out;
}

}  // namespace

std::string render_hints(std::span<const rules::RuleHint> hints) {
    std::string out;
    for (auto category : rules::kAllCategories) {
        bool header = false;
        for (const auto& h : hints) {
            if (h.category != category) continue;
            if (!header) {
                if (!out.empty()) out += '\n';
                out += "[" + std::string(rules::category_name(category)) + "]\n";
                header = true;
            }
            out += "- " + one_line(h.snippet) + " → ";
            std::string_view rest = h.suggested_rust;
            for (bool first = true; !rest.empty() || first; first = false) {
                const auto nl = rest.find('\n');
                if (!first) out += "\n    ";
                out += rest.substr(0, nl);
                if (nl == std::string_view::npos) break;
                rest.remove_prefix(nl + 1);
            }
            out += '\n';
        }
    }
    return out;
}

std::string render_demos(std::span<const corpus::DemoExample> demos) {
    std::string out;
    for (std::size_t i = 0; i < demos.size(); ++i) {
        if (i) out += '\n';
        out += "Example " + std::to_string(i + 1) + "\nC:\n" + fenced("c", demos[i].c_code) + "\nRust:\n" +
               fenced("rust", demos[i].rust_code) + "\n";
    }
    return out;
}

ComposedPrompt compose_prompt(PromptMode mode, std::string_view c_code, std::span<const rules::RuleHint> hints,
                              std::span<const corpus::DemoExample> demos,
                              const std::optional<summarizer::StructuredSummary>& summary) {
    ComposedPrompt p;
    p.system_text = std::string(kSystemInstruction);
    p.user_text = std::string(kInstructionSentence) + "\n\n";

    if (mode == PromptMode::Instruction) {
        p.code = fenced("c", c_code) + "\n";
        p.user_text += *p.code;
        return p;
    }

    auto section = [&](std::string_view header, std::string body) {
        p.user_text += std::string(header) + "\n" + body;
        if (p.user_text.back() != '\n') p.user_text += '\n';
        p.user_text += '\n';
        return body;
    };
    const bool irene = mode == PromptMode::Irene;
    if (irene && !hints.empty()) p.hints = section(kHintsHeader, render_hints(hints));
    if (!demos.empty()) p.demos = section(kDemosHeader, render_demos(demos));
    p.code = section(kCodeHeader, fenced("c", c_code) + "\n");
    if (irene && summary) p.summary = section(kSummaryHeader, summarizer::render_summary(*summary) + "\n");
    while (p.user_text.size() > 1 && p.user_text.back() == '\n' && p.user_text[p.user_text.size() - 2] == '\n')
        p.user_text.pop_back();
    return p;
}

std::vector<corpus::DemoExample> sample_demos(const corpus::CorpusIndex& index, std::size_t count,
                                              std::uint64_t seed, std::string_view job_id) {
    const auto& docs = index.documents();
    std::vector<std::size_t> order(docs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed ^ util::stable_hash(job_id));
    const std::size_t n = std::min(count, order.size());
    for (std::size_t i = 0; i < n; ++i) {
        // Explicit modulo draw: std::uniform_int_distribution is not portable across standard libraries.
        const std::size_t j = i + static_cast<std::size_t>(rng() % (order.size() - i));
        std::swap(order[i], order[j]);
    }
    std::vector<corpus::DemoExample> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(docs[order[i]]);
    return out;
}

TranslationAudit translate_once(const llm::Gateway& gateway, const corpus::CorpusIndex* index,
                                const TranslationJob& job, const TranslatorConfig& config) {
    TranslationAudit audit;
    audit.mode = config.mode;
    audit.effective_mode = config.mode;
    std::vector<corpus::DemoExample> demos;

    if (config.mode == PromptMode::Irene) {
        try {
            audit.hints = rules::analyze_source(job.c_code);
        } catch (const ParseError& e) {
            audit.warnings.push_back(std::string("rule analysis failed, using instruction prompt: ") + e.what());
            audit.effective_mode = PromptMode::Instruction;
        }
    }

    const bool wants_demos = audit.effective_mode != PromptMode::Instruction;
    if (wants_demos) {
        if (!index || index->empty()) {
            audit.warnings.push_back("corpus is empty; continuing without demonstrations");
        } else if (audit.effective_mode == PromptMode::ICL) {
            demos = sample_demos(*index, config.icl_examples, config.seed, job.id);
        } else {
            const bool rag = audit.effective_mode == PromptMode::RAG;
            const auto required = rag ? rules::CategorySet{} : rules::categories_of(audit.hints);
            for (auto& hit : corpus::retrieve(*index, job.c_code, required, rag ? 1 : config.k,
                                              rag ? 0.0 : config.threshold))
                demos.push_back(std::move(hit.example));
        }
    }
    for (const auto& d : demos) audit.demo_ids.push_back(d.id);

    std::optional<summarizer::StructuredSummary> summary;
    if (audit.effective_mode == PromptMode::Irene) {
        const llm::Gateway& g = config.summary_gateway ? *config.summary_gateway : gateway;
        audit.summary = summarizer::summarize_exchange(g, job.c_code, config.summary);
        summary = audit.summary->summary;
    }

    audit.prompt = compose_prompt(audit.effective_mode, job.c_code, audit.hints, demos, summary);
    audit.request.system_text = audit.prompt.system_text;
    audit.request.user_text = audit.prompt.user_text;
    audit.request.temperature = config.temperature;
    audit.request.top_p = config.top_p;
    audit.request.max_tokens = config.max_tokens;
    audit.request.model_name = config.model_name.empty() ? gateway.model_name() : config.model_name;

    audit.raw_reply = gateway.generate(audit.request).text;
    audit.rust_code = llm::extract_code_block(audit.raw_reply);
    return audit;
}

namespace {

nlohmann::json request_json(const llm::GenerationRequest& r) {
    return {{"model", r.model_name},        {"system_text", r.system_text}, {"user_text", r.user_text},
            {"temperature", r.temperature}, {"top_p", r.top_p},             {"max_tokens", r.max_tokens}};
}

}  // namespace

nlohmann::json to_json(const TranslationAudit& audit) {
    nlohmann::json j;
    j["mode"] = mode_name(audit.mode);
    j["effective_mode"] = mode_name(audit.effective_mode);
    j["warnings"] = audit.warnings;
    nlohmann::json hints = nlohmann::json::array();
    for (const auto& h : audit.hints) hints.push_back(rules::hint_to_json(h));
    j["hints"] = std::move(hints);
    j["demo_ids"] = audit.demo_ids;
    if (audit.summary) {
        const auto& s = audit.summary->summary;
        j["summary"] = {{"request", request_json(audit.summary->request)},
                        {"reply", audit.summary->reply},
                        {"parsed",
                         {{"input", s.input_desc},
                          {"output", s.output_desc},
                          {"functionality", s.functionality},
                          {"well_formed", s.well_formed}}}};
    } else {
        j["summary"] = nullptr;
    }
    auto opt = [](const std::optional<std::string>& s) { return s ? nlohmann::json(*s) : nlohmann::json(nullptr); };
    j["prompt_sections"] = {{"hints", opt(audit.prompt.hints)},
                            {"demos", opt(audit.prompt.demos)},
                            {"code", opt(audit.prompt.code)},
                            {"summary", opt(audit.prompt.summary)}};
    j["request"] = request_json(audit.request);
    j["raw_reply"] = audit.raw_reply;
    j["rust_code"] = audit.rust_code;
    return j;
}

}  // namespace c2r::translator
