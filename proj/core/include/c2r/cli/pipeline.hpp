#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "c2r/cli/config.hpp"
#include "c2r/compiler/compiler.hpp"
#include "c2r/corpus/corpus.hpp"
#include "c2r/llm/gateway.hpp"
#include "c2r/metrics/metrics.hpp"
#include "c2r/translator/translator.hpp"

namespace c2r::cli {

// Mock when mock_script is set, else the remote endpoint. Throws ConfigError.
std::shared_ptr<llm::Backend> make_backend(const RunConfig& config);
std::unique_ptr<llm::Gateway> make_summary_gateway(const RunConfig& config);

compiler::RustcSettings rustc_settings(const RunConfig& config);
translator::TranslatorConfig translator_config(const RunConfig& config);

// Per-job state after translation and refinement at the largest cap.
struct JobRun {
    translator::TranslationJob job;
    std::optional<translator::TranslationAudit> audit;
    std::optional<compiler::RefinementTrace> trace;
    std::string error;
};

// The trace as it would have been with at most `cap` repair rounds.
compiler::RefinementTrace truncate_trace(const compiler::RefinementTrace& trace, int cap);

struct RunContext {
    const RunConfig& config;
    const llm::Gateway& gateway;
    compiler::CompilerBackend& compiler;
    const corpus::CorpusIndex* index = nullptr;
    std::string toolchain;
    std::ostream* log = nullptr;
};

// Translates every job and evaluates each cap in `caps`. Writes, per cap,
// the layout rust/<id>.rs, audit/<id>.json, run.json, report.json,
// report.txt under out_dir (or out_dir/iter_<cap> when sweeping), plus
// sweep.csv for sweeps. Returns the reports in cap order.
std::vector<metrics::MetricsReport> run_translation(const RunContext& ctx,
                                                    std::span<const translator::TranslationJob> jobs,
                                                    std::span<const int> caps, const std::filesystem::path& out_dir);

// Run manifest embedded in report.json.
nlohmann::json run_manifest(const RunConfig& config, const std::string& toolchain, int iterations,
                            std::span<const translator::TranslationJob> jobs);

// Report JSON as written to report.json: metrics plus the run manifest.
std::string report_file_text(const metrics::MetricsReport& report, const nlohmann::json& manifest);

// Offline re-scoring: recompiles and reruns stored Rust without any model.
// `target` is an output directory (with run.json), a directory of .rs
// files, or a report.json. Throws IoError, EmptyDataset.
struct Rescored {
    metrics::MetricsReport report;
    nlohmann::json manifest;  // null when the source had none
};
Rescored rescore(const std::filesystem::path& target, const std::optional<std::filesystem::path>& dataset,
                 compiler::CompilerBackend& compiler, const RunConfig& config);

std::string safe_file_name(std::string_view id);

}  // namespace c2r::cli
