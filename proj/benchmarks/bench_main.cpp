#include <random>

#include <benchmark/benchmark.h>

#include "bm25_oracle.hpp"
#include "c2r/corpus/corpus.hpp"
#include "c2r/metrics/metrics.hpp"
#include "c2r/rules/rule_analyzer.hpp"
#include "c2r/translator/job.hpp"
#include "paths.hpp"
#include "unsafe_oracle.hpp"

namespace {

std::vector<c2r::translator::TranslationJob>& mini_jobs() {
    static auto jobs = c2r::translator::load_dataset(c2r::test::mini("dataset.jsonl"));
    return jobs;
}

void BM_AnalyzeMini(benchmark::State& state) {
    const auto& jobs = mini_jobs();
    std::size_t bytes = 0;
    for (auto _ : state) {
        for (const auto& j : jobs) {
            benchmark::DoNotOptimize(c2r::rules::analyze_source(j.c_code));
            bytes += j.c_code.size();
        }
    }
    state.SetBytesProcessed(static_cast<int64_t>(bytes));
}
BENCHMARK(BM_AnalyzeMini);

c2r::corpus::CorpusIndex random_index(std::size_t docs, std::size_t terms) {
    std::mt19937_64 rng(docs * 31 + terms);
    std::vector<c2r::corpus::DemoExample> ex;
    const auto& vocab = c2r::test::oracle_vocabulary();
    for (std::size_t d = 0; d < docs; ++d) {
        std::vector<std::string> t;
        for (std::size_t i = 0; i < terms; ++i) t.push_back(vocab[rng() % vocab.size()]);
        c2r::corpus::DemoExample e;
        e.id = "d" + std::to_string(d);
        e.c_code = c2r::test::join_noisy(t, rng);
        ex.push_back(std::move(e));
    }
    return c2r::corpus::CorpusIndex::build(std::move(ex));
}

void BM_IndexBuild(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(random_index(static_cast<std::size_t>(state.range(0)), 200));
}
BENCHMARK(BM_IndexBuild)->Arg(100)->Arg(1000);

void BM_Retrieve(benchmark::State& state) {
    const auto index = random_index(static_cast<std::size_t>(state.range(0)), 200);
    const std::string query = mini_jobs()[2].c_code;
    for (auto _ : state) benchmark::DoNotOptimize(c2r::corpus::retrieve(index, query, {}, 1, 0.0));
}
BENCHMARK(BM_Retrieve)->Arg(100)->Arg(1000)->Arg(10000);

void BM_ScanUnsafe(benchmark::State& state) {
    std::string text;
    for (std::uint64_t s = 0; s < 50; ++s) text += c2r::test::UnsafeProgramBuilder(s).build().text;
    for (auto _ : state) benchmark::DoNotOptimize(c2r::metrics::scan_unsafe(text));
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ScanUnsafe);

}  // namespace
BENCHMARK_MAIN();
