#include "c2r/summarizer/summarizer.hpp"

#include <array>
#include <cctype>
#include <optional>
#include <stdexcept>

#include "c2r/util/files.hpp"

namespace c2r::summarizer {

namespace detail {
extern const std::string_view kDefaultTemplate;
}

std::string_view default_template() { return detail::kDefaultTemplate; }

std::string build_summary_prompt(std::string_view c_code, std::string_view prompt_template) {
    static constexpr std::string_view kSlot = "{{c_code}}";
    std::string out;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t hit = prompt_template.find(kSlot, pos);
        if (hit == std::string_view::npos) break;
        out.append(prompt_template.substr(pos, hit - pos));
        out.append(c_code);
        pos = hit + kSlot.size();
    }
    out.append(prompt_template.substr(pos));
    return out;
}

namespace {

constexpr std::array<std::string_view, 3> kLabels = {"input", "output", "functionality"};

bool iequals_prefix(std::string_view s, std::string_view lower_prefix) {
    if (s.size() < lower_prefix.size()) return false;
    for (std::size_t i = 0; i < lower_prefix.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(s[i])) != lower_prefix[i]) return false;
    return true;
}

std::string_view skip_decoration(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '*' || s.front() == '#' ||
                          s.front() == '-' || s.front() == '_'))
        s.remove_prefix(1);
    return s;
}

// Returns (label index, rest of line) when the line opens a section.
std::optional<std::pair<int, std::string_view>> match_label(std::string_view line) {
    std::string_view s = skip_decoration(line);
    for (std::size_t i = 0; i < kLabels.size(); ++i) {
        if (!iequals_prefix(s, kLabels[i])) continue;
        std::string_view rest = s.substr(kLabels[i].size());
        while (!rest.empty() && (rest.front() == '*' || rest.front() == '_')) rest.remove_prefix(1);
        if (rest.empty() || rest.front() != ':') continue;
        rest.remove_prefix(1);
        while (!rest.empty() && (rest.front() == '*' || rest.front() == '_')) rest.remove_prefix(1);
        return std::pair{static_cast<int>(i), rest};
    }
    return std::nullopt;
}

}  // namespace

StructuredSummary parse_summary(std::string_view text) {
    std::array<std::optional<std::string>, 3> sections;
    int current = -1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (auto label = match_label(line)) {
            current = label->first;
            auto& slot = sections[current];
            if (!slot) slot.emplace();
            else slot->push_back('\n');
            slot->append(label->second);
        } else if (current >= 0) {
            sections[current]->push_back('\n');
            sections[current]->append(line);
        }
        if (eol == text.size()) break;
        pos = eol + 1;
    }

    StructuredSummary s;
    if (sections[0] && sections[1] && sections[2]) {
        s.input_desc = util::trim(*sections[0]);
        s.output_desc = util::trim(*sections[1]);
        s.functionality = util::trim(*sections[2]);
        s.well_formed = true;
    } else {
        s.functionality = std::string(text);
    }
    return s;
}

std::string render_summary(const StructuredSummary& summary) {
    if (!summary.well_formed) return summary.functionality;
    auto line = [](std::string_view label, const std::string& body) {
        std::string out(label);
        if (!body.empty()) out += " " + body;
        return out;
    };
    return line("Input:", summary.input_desc) + "\n" + line("Output:", summary.output_desc) + "\n" +
           line("Functionality:", summary.functionality);
}

SummaryExchange summarize_exchange(const llm::Gateway& gateway, std::string_view c_code,
                                   const SummaryOptions& options) {
    if (c_code.empty()) throw std::invalid_argument("summarize: empty C code");
    SummaryExchange ex;
    ex.request.system_text = "You are an expert C programmer who documents programs precisely.";
    ex.request.user_text = build_summary_prompt(
        c_code, options.prompt_template.empty() ? default_template() : std::string_view(options.prompt_template));
    ex.request.max_tokens = options.max_tokens;
    ex.request.model_name = options.model_name;
    ex.reply = gateway.generate(ex.request).text;
    if (ex.request.model_name.empty()) ex.request.model_name = gateway.model_name();
    ex.summary = parse_summary(ex.reply);
    return ex;
}

}  // namespace c2r::summarizer
