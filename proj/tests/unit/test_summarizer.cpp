#include <random>

#include <gtest/gtest.h>

#include "c2r/error.hpp"
#include "c2r/llm/gateway.hpp"
#include "c2r/summarizer/summarizer.hpp"

using namespace c2r::summarizer;

namespace {

c2r::llm::Gateway mock_gateway(std::vector<std::string> replies) {
    return c2r::llm::Gateway(std::make_shared<c2r::llm::MockBackend>(std::move(replies)), "summary-model");
}

}  // namespace

TEST(Template, BundledTemplateHasSlotAndLabels) {
    const auto t = default_template();
    EXPECT_NE(t.find("{{c_code}}"), std::string_view::npos);
    for (auto label : {"Input:", "Output:", "Functionality:"}) EXPECT_NE(t.find(label), std::string_view::npos);
}

TEST(Template, CodeSubstitutedVerbatim) {
    const std::string code = "int main() { printf(\"{{x}}\\n\"); }";
    const auto p = build_summary_prompt(code);
    EXPECT_NE(p.find("```c\n" + code + "\n```"), std::string::npos);
    EXPECT_EQ(p.find("{{c_code}}"), std::string::npos);
    EXPECT_EQ(build_summary_prompt("X", "a {{c_code}} b {{c_code}}"), "a X b X");
    EXPECT_EQ(build_summary_prompt("X", "no slot"), "no slot");
}

TEST(Parse, ThreeSections) {
    const auto s = parse_summary("Input: two integers a and b\nOutput: their sum\nFunctionality: adds them\n");
    EXPECT_TRUE(s.well_formed);
    EXPECT_EQ(s.input_desc, "two integers a and b");
    EXPECT_EQ(s.output_desc, "their sum");
    EXPECT_EQ(s.functionality, "adds them");
}

TEST(Parse, CaseInsensitiveDecoratedAndMultiline) {
    const auto s = parse_summary(
        "Here is the summary.\n\n**INPUT:** an array\n  of n ints\n- output: the max\n### Functionality:\nscans once\n"
        "updating the best\n");
    ASSERT_TRUE(s.well_formed);
    EXPECT_EQ(s.input_desc, "an array\n  of n ints");
    EXPECT_EQ(s.output_desc, "the max");
    EXPECT_EQ(s.functionality, "scans once\nupdating the best");
}

TEST(Parse, LabelsMustStartLine) {
    const auto s = parse_summary("The Input: is x. Output: y. Functionality: z.");
    EXPECT_FALSE(s.well_formed);
}

TEST(Parse, MissingSectionFallsBackToRawText) {
    const std::string raw = "Input: x\nFunctionality: y";
    const auto s = parse_summary(raw);
    EXPECT_FALSE(s.well_formed);
    EXPECT_EQ(s.functionality, raw);
    EXPECT_TRUE(s.input_desc.empty());
    EXPECT_EQ(render_summary(s), raw);
}

TEST(Parse, EmptySectionBodyStillWellFormed) {
    const auto s = parse_summary("Input:\nOutput: nothing\nFunctionality: none");
    EXPECT_TRUE(s.well_formed);
    EXPECT_EQ(s.input_desc, "");
    EXPECT_EQ(render_summary(s), "Input:\nOutput: nothing\nFunctionality: none");
}

TEST(Render, Format) {
    StructuredSummary s{"a", "b", "c", true};
    EXPECT_EQ(render_summary(s), "Input: a\nOutput: b\nFunctionality: c");
}

TEST(Property, RenderParseRoundTrip) {
    std::mt19937 rng(5);
    const std::vector<std::string> words = {"reads", "n", "integers", "prints", "sum", "circular", "array", "x",
                                            "input", "output", "value:", "then"};
    auto text = [&] {
        std::string out;
        const int lines = 1 + static_cast<int>(rng() % 3);
        for (int l = 0; l < lines; ++l) {
            if (l) out += "\n";
            const int n = 1 + static_cast<int>(rng() % 6);
            for (int w = 0; w < n; ++w) out += (w ? " " : "") + words[rng() % words.size()];
        }
        return out;
    };
    for (int i = 0; i < 300; ++i) {
        StructuredSummary s{text(), text(), text(), true};
        // Continuation lines that themselves start with a label are not representable.
        bool ambiguous = false;
        for (const auto* f : {&s.input_desc, &s.output_desc, &s.functionality})
            for (std::size_t p = f->find('\n'); p != std::string::npos; p = f->find('\n', p + 1))
                if (f->compare(p + 1, 5, "input") == 0 || f->compare(p + 1, 6, "output") == 0) ambiguous = true;
        if (ambiguous) continue;
        EXPECT_EQ(parse_summary(render_summary(s)), s) << render_summary(s);
    }
}

TEST(Summarize, SendsPromptAndParsesReply) {
    auto g = mock_gateway({"Input: array of ints\nOutput: rotated array\nFunctionality: shifts elements in a circular manner"});
    const std::string code = "int main() { return 0; }";
    const auto ex = summarize_exchange(g, code);
    EXPECT_NE(ex.request.user_text.find(code), std::string::npos);
    EXPECT_EQ(ex.request.model_name, "summary-model");
    EXPECT_TRUE(ex.summary.well_formed);
    EXPECT_NE(ex.summary.functionality.find("circular manner"), std::string::npos);
}

TEST(Summarize, CustomTemplateAndModel) {
    auto g = mock_gateway({"free text"});
    SummaryOptions opts;
    opts.prompt_template = "Describe: {{c_code}}";
    opts.model_name = "other";
    opts.max_tokens = 64;
    const auto ex = summarize_exchange(g, "int x;", opts);
    EXPECT_EQ(ex.request.user_text, "Describe: int x;");
    EXPECT_EQ(ex.request.model_name, "other");
    EXPECT_EQ(ex.request.max_tokens, 64);
    EXPECT_FALSE(ex.summary.well_formed);
    EXPECT_EQ(ex.summary.functionality, "free text");
}

TEST(Summarize, EmptyCodeRejected) {
    auto g = mock_gateway({"x"});
    EXPECT_THROW(summarize(g, ""), std::invalid_argument);
}

TEST(Summarize, GatewayErrorsPropagate) {
    auto g = mock_gateway({});
    EXPECT_THROW(summarize(g, "int x;"), c2r::MockExhausted);
}
