#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "c2r/error.hpp"
#include "c2r/translator/translator.hpp"
#include "c2r/util/files.hpp"
#include "paths.hpp"

using namespace c2r::translator;
using c2r::corpus::CorpusIndex;
using c2r::corpus::DemoExample;

namespace {

// Records every request; answers summaries with a fixed summary and
// everything else with a fenced program.
struct Recorder : c2r::llm::Backend {
    std::vector<c2r::llm::GenerationRequest> requests;
    c2r::llm::GenerationResponse generate(const c2r::llm::GenerationRequest& r) override {
        requests.push_back(r);
        if (r.user_text.find("structured summary") != std::string::npos)
            return {"Input: n\nOutput: m\nFunctionality: sums in a circular manner", c2r::llm::FinishReason::Stop, {}};
        return {"Sure:\n```rust\nfn main() {}\n```", c2r::llm::FinishReason::Stop, {}};
    }
};

DemoExample demo(std::string id, std::string c, c2r::rules::CategorySet cats) {
    DemoExample d;
    d.id = std::move(id);
    d.c_code = std::move(c);
    d.rust_code = "fn main() { /* " + d.id + " */ }";
    d.categories = std::move(cats);
    d.token_count = c2r::corpus::tokenize(d.c_code).size();
    return d;
}

CorpusIndex small_corpus() {
    using C = c2r::rules::RuleCategory;
    return CorpusIndex::build({
        demo("io_sum", "int main() { int a, b; scanf(\"%d %d\", &a, &b); printf(\"%d\\n\", a + b); return 0; }", {C::IO}),
        demo("arr_fill", "int a[100]; int main() { for (int i = 0; i < 100; i++) a[i] = i; return 0; }", {C::Array}),
        demo("ptr_node", "struct Node { int v; }; int main() { struct Node *n = malloc(sizeof(struct Node)); free(n); }",
             {C::Pointers}),
        demo("io_arr", "int a[10]; int main() { int n; scanf(\"%d\", &n); for (int i = 0; i < n; i++) scanf(\"%d\", &a[i]); }",
             {C::IO, C::Array}),
        demo("mix", "long long s; int main() { int x = 2; s = s + x; return 0; }", {C::Mixtype}),
    });
}

TranslationJob job(std::string id, std::string c) {
    TranslationJob j;
    j.id = std::move(id);
    j.c_code = std::move(c);
    return j;
}

const std::string kSumCode =
    "int main() { int a, b; scanf(\"%d %d\", &a, &b); printf(\"%d\\n\", a + b); return 0; }";

}  // namespace

TEST(Modes, NamesParseCaseInsensitively) {
    EXPECT_EQ(parse_mode("IRENE"), PromptMode::Irene);
    EXPECT_EQ(parse_mode("icl"), PromptMode::ICL);
    EXPECT_EQ(parse_mode("Rag"), PromptMode::RAG);
    EXPECT_EQ(parse_mode("instruction"), PromptMode::Instruction);
    EXPECT_THROW(parse_mode("fewshot"), c2r::ConfigError);
    for (auto m : {PromptMode::Instruction, PromptMode::ICL, PromptMode::RAG, PromptMode::Irene})
        EXPECT_EQ(parse_mode(mode_name(m)), m);
}

TEST(Compose, InstructionIsSentencePlusCode) {
    const auto hints = c2r::rules::analyze_source(kSumCode);
    const auto demos = small_corpus().documents();
    const c2r::summarizer::StructuredSummary s{"a", "b", "c", true};
    const auto p = compose_prompt(PromptMode::Instruction, "int x;", hints, demos, s);
    EXPECT_EQ(p.user_text, "Translate the following C code to Rust.\n\n```c\nint x;\n```\n");
    EXPECT_FALSE(p.hints || p.demos || p.summary);
    EXPECT_EQ(p.system_text, std::string(kSystemInstruction));
}

TEST(Compose, IclAndRagIgnoreHintsAndSummary) {
    const auto hints = c2r::rules::analyze_source(kSumCode);
    const auto demos = small_corpus().documents();
    const c2r::summarizer::StructuredSummary s{"a", "b", "c", true};
    for (auto mode : {PromptMode::ICL, PromptMode::RAG}) {
        const auto p = compose_prompt(mode, kSumCode, hints, demos, s);
        EXPECT_FALSE(p.hints);
        EXPECT_FALSE(p.summary);
        ASSERT_TRUE(p.demos);
        EXPECT_EQ(p.user_text.find(kHintsHeader), std::string::npos);
        EXPECT_EQ(p.user_text.find(kSummaryHeader), std::string::npos);
        EXPECT_LT(p.user_text.find(kDemosHeader), p.user_text.find(kCodeHeader));
    }
}

TEST(Compose, IreneSectionOrder) {
    const auto hints = c2r::rules::analyze_source(kSumCode);
    std::vector<DemoExample> demos{small_corpus().documents()[0]};
    const c2r::summarizer::StructuredSummary s{"two ints", "sum", "adds", true};
    const auto p = compose_prompt(PromptMode::Irene, kSumCode, hints, demos, s);
    const auto& u = p.user_text;
    const auto h = u.find(kHintsHeader), d = u.find(kDemosHeader), c = u.find(kCodeHeader), m = u.find(kSummaryHeader);
    ASSERT_NE(h, std::string::npos);
    ASSERT_NE(m, std::string::npos);
    EXPECT_EQ(u.find(kInstructionSentence), 0u);
    EXPECT_LT(h, d);
    EXPECT_LT(d, c);
    EXPECT_LT(c, m);
    EXPECT_NE(u.find("Input: two ints\nOutput: sum\nFunctionality: adds"), std::string::npos);
    EXPECT_NE(u.find(*p.hints), std::string::npos);
    EXPECT_NE(p.hints->find("[IO]"), std::string::npos);
}

TEST(Compose, EmptySectionsLeftOut) {
    const auto p = compose_prompt(PromptMode::Irene, "int x;", {}, {}, std::nullopt);
    EXPECT_EQ(p.user_text, "Translate the following C code to Rust.\n\n### C code\n```c\nint x;\n```\n");
}

TEST(Render, HintsGroupedWithContinuationIndent) {
    c2r::rules::RuleHint a{c2r::rules::RuleCategory::Array, "int a[3];", "let mut a = [0; 3];", "", 1, 1, 0};
    c2r::rules::RuleHint p{c2r::rules::RuleCategory::Pointers, "int *p =\n  malloc(4);", "line one\nline two", "", 2, 3, 10};
    const std::vector<c2r::rules::RuleHint> hints{a, p};
    EXPECT_EQ(render_hints(hints),
              "[Pointers]\n- int *p = malloc(4); → line one\n    line two\n\n[Array]\n- int a[3]; → let mut a = [0; 3];\n");
}

TEST(Render, DemosNumbered) {
    std::vector<DemoExample> d{demo("x", "int x;", {})};
    EXPECT_EQ(render_demos(d), "Example 1\nC:\n```c\nint x;\n```\nRust:\n```rust\nfn main() { /* x */ }\n```\n");
}

TEST(Sampling, DeterministicDistinctAndBounded) {
    const auto index = small_corpus();
    const auto a = sample_demos(index, 4, 42, "job1");
    const auto b = sample_demos(index, 4, 42, "job1");
    ASSERT_EQ(a.size(), 4u);
    EXPECT_EQ(a, b);
    std::set<std::string> ids;
    for (const auto& d : a) ids.insert(d.id);
    EXPECT_EQ(ids.size(), 4u);
    EXPECT_EQ(sample_demos(index, 10, 1, "j").size(), 5u);
    EXPECT_TRUE(sample_demos(index, 0, 1, "j").empty());

    std::set<std::vector<std::string>> draws;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::vector<std::string> v;
        for (const auto& d : sample_demos(index, 4, seed, "job1")) v.push_back(d.id);
        draws.insert(v);
    }
    EXPECT_GT(draws.size(), 5u);
}

TEST(StableHash, Fnv1aReferenceValues) {
    EXPECT_EQ(c2r::util::stable_hash(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(c2r::util::stable_hash("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(c2r::util::stable_hash("foobar"), 0x85944171f73967e8ULL);
}

TEST(Translate, InstructionSendsOneRequest) {
    auto rec = std::make_shared<Recorder>();
    c2r::llm::Gateway g(rec, "m");
    TranslatorConfig cfg;
    cfg.mode = PromptMode::Instruction;
    const auto index = small_corpus();
    const auto audit = translate_once(g, &index, job("j", kSumCode), cfg);
    ASSERT_EQ(rec->requests.size(), 1u);
    EXPECT_EQ(audit.rust_code, "fn main() {}");
    EXPECT_TRUE(audit.hints.empty());
    EXPECT_TRUE(audit.demo_ids.empty());
    EXPECT_FALSE(audit.summary);
    EXPECT_EQ(rec->requests[0].model_name, "m");
}

TEST(Translate, IclDrawsConfiguredCount) {
    auto rec = std::make_shared<Recorder>();
    c2r::llm::Gateway g(rec);
    TranslatorConfig cfg;
    cfg.mode = PromptMode::ICL;
    cfg.seed = 3;
    const auto index = small_corpus();
    const auto a = translate_once(g, &index, job("j", kSumCode), cfg);
    const auto b = translate_once(g, &index, job("j", kSumCode), cfg);
    EXPECT_EQ(a.demo_ids.size(), 4u);
    EXPECT_EQ(a.demo_ids, b.demo_ids);
    EXPECT_EQ(rec->requests[0].user_text, rec->requests[1].user_text);
}

TEST(Translate, RagUsesTopOneUnfiltered) {
    auto rec = std::make_shared<Recorder>();
    c2r::llm::Gateway g(rec);
    TranslatorConfig cfg;
    cfg.mode = PromptMode::RAG;
    cfg.k = 3;
    cfg.threshold = 1e9;
    const auto index = small_corpus();
    const auto audit = translate_once(g, &index, job("j", kSumCode), cfg);
    ASSERT_EQ(audit.demo_ids.size(), 1u);
    EXPECT_EQ(audit.demo_ids[0], "io_sum");
    EXPECT_TRUE(audit.hints.empty());
    EXPECT_EQ(rec->requests.size(), 1u);
}

TEST(Translate, IreneBelowThresholdHasNoDemos) {
    auto rec = std::make_shared<Recorder>();
    c2r::llm::Gateway g(rec);
    TranslatorConfig cfg;
    cfg.threshold = 1e6;
    const auto index = small_corpus();
    const auto audit = translate_once(g, &index, job("j", kSumCode), cfg);
    EXPECT_TRUE(audit.demo_ids.empty());
    EXPECT_FALSE(audit.prompt.demos);
    EXPECT_EQ(audit.request.user_text.find(kDemosHeader), std::string::npos);
    EXPECT_TRUE(audit.prompt.hints);
    EXPECT_TRUE(audit.prompt.summary);
    ASSERT_EQ(rec->requests.size(), 2u);  // summary, then translation
    EXPECT_NE(rec->requests[0].user_text.find("structured summary"), std::string::npos);
    EXPECT_NE(rec->requests[1].user_text.find("circular manner"), std::string::npos);
}

TEST(Translate, IreneRetrievesCategoryMatches) {
    auto rec = std::make_shared<Recorder>();
    c2r::llm::Gateway g(rec);
    TranslatorConfig cfg;
    cfg.threshold = 0;
    cfg.k = 2;
    const auto index = small_corpus();
    const std::string code = "int a[10]; int main() { int n; scanf(\"%d\", &n); a[n] = 1; return 0; }";
    const auto audit = translate_once(g, &index, job("j", code), cfg);
    EXPECT_EQ(c2r::rules::categories_of(audit.hints),
              (c2r::rules::CategorySet{c2r::rules::RuleCategory::IO, c2r::rules::RuleCategory::Array}));
    EXPECT_EQ(audit.demo_ids, (std::vector<std::string>{"io_arr"}));
}

TEST(Translate, SeparateSummaryGateway) {
    auto main_rec = std::make_shared<Recorder>();
    auto sum_rec = std::make_shared<Recorder>();
    c2r::llm::Gateway g(main_rec, "small");
    c2r::llm::Gateway sg(sum_rec, "big");
    TranslatorConfig cfg;
    cfg.summary_gateway = &sg;
    const auto audit = translate_once(g, nullptr, job("j", kSumCode), cfg);
    EXPECT_EQ(main_rec->requests.size(), 1u);
    EXPECT_EQ(sum_rec->requests.size(), 1u);
    EXPECT_EQ(audit.summary->request.model_name, "big");
    EXPECT_FALSE(audit.warnings.empty());  // no corpus
}

TEST(Translate, ParseFailureDowngradesToInstruction) {
    auto rec = std::make_shared<Recorder>();
    c2r::llm::Gateway g(rec);
    TranslatorConfig cfg;
    const auto index = small_corpus();
    const auto audit = translate_once(g, &index, job("j", "int main() {"), cfg);
    EXPECT_EQ(audit.effective_mode, PromptMode::Instruction);
    ASSERT_EQ(audit.warnings.size(), 1u);
    EXPECT_EQ(rec->requests.size(), 1u);
    EXPECT_FALSE(audit.summary);
}

TEST(Translate, GatewayErrorsPropagate) {
    c2r::llm::Gateway g(std::make_shared<c2r::llm::MockBackend>());
    TranslatorConfig cfg;
    cfg.mode = PromptMode::Instruction;
    EXPECT_THROW(translate_once(g, nullptr, job("j", "int x;"), cfg), c2r::MockExhausted);
}

TEST(Audit, JsonHasReplayFields) {
    auto rec = std::make_shared<Recorder>();
    c2r::llm::Gateway g(rec, "m");
    TranslatorConfig cfg;
    const auto audit = translate_once(g, nullptr, job("j", kSumCode), cfg);
    const auto j = to_json(audit);
    EXPECT_EQ(j["mode"], "irene");
    EXPECT_EQ(j["request"]["user_text"], audit.request.user_text);
    EXPECT_EQ(j["raw_reply"], audit.raw_reply);
    EXPECT_TRUE(j["summary"]["parsed"]["well_formed"].get<bool>());
    EXPECT_FALSE(j.contains("latency"));
}

TEST(Dataset, LoadSaveAndErrors) {
    const auto dir = c2r::test::scratch("dataset");
    TranslationJob a = job("a", "int x;");
    a.test_cases = {{"1\n", "2\n"}};
    a.reference_rust = "fn main() {}";
    std::vector<TranslationJob> jobs{a, job("b", "int y;")};
    save_dataset(dir / "d.jsonl", jobs);
    EXPECT_EQ(load_dataset(dir / "d.jsonl"), jobs);
    c2r::util::write_file(dir / "dup.jsonl", R"({"id":"a","c_code":"x"})" "\n" R"({"id":"a","c_code":"y"})" "\n");
    EXPECT_THROW(load_dataset(dir / "dup.jsonl"), c2r::DuplicateId);
    c2r::util::write_file(dir / "bad.jsonl", R"({"id":"a"})" "\n");
    EXPECT_THROW(load_dataset(dir / "bad.jsonl"), c2r::MalformedRecord);
    EXPECT_EQ(load_dataset(c2r::test::mini("dataset.jsonl")).size(), 10u);
}
