#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "c2r/translator/job.hpp"

namespace c2r::metrics {

struct ExecResult {
    std::string stdout_text;
    int exit_code = 0;
    bool timed_out = false;
    std::chrono::milliseconds duration{0};
};

// Runs under the global process limiter. Throws SpawnError.
ExecResult run_program(const std::filesystem::path& executable, const std::string& stdin_text,
                       std::chrono::milliseconds timeout = std::chrono::seconds(10));

// Trailing whitespace removed from every line, trailing blank lines dropped.
std::string normalize_output(std::string_view text);

// 1 when every case matches after normalization and none timed out.
// Exit codes are ignored. nullopt for an empty case list.
std::optional<int> ca_one(std::span<const ExecResult> results, std::span<const translator::TestCase> cases);

// Runs the executable on every case and applies ca_one.
std::optional<int> evaluate_executable(const std::filesystem::path& executable,
                                       std::span<const translator::TestCase> cases,
                                       std::chrono::milliseconds timeout = std::chrono::seconds(10));

struct UnsafeScan {
    std::size_t total_code_lines = 0;  // non-blank, not comment-only
    std::size_t unsafe_lines = 0;      // code lines inside regions
    std::vector<std::pair<int, int>> regions;  // merged, 1-based inclusive

    double ratio() const {
        return total_code_lines == 0 ? 0.0 : static_cast<double>(unsafe_lines) / static_cast<double>(total_code_lines);
    }
};

// Lexical scan; never fails. A region runs from an `unsafe` keyword to the
// brace closing the first block opened after it (to end of file when
// unbalanced).
UnsafeScan scan_unsafe(std::string_view rust_code);

struct JobRow {
    std::string id;
    bool compiled = false;
    std::optional<int> ca;  // absent when the job has no test cases
    std::size_t total_code_lines = 0;
    std::size_t unsafe_lines = 0;
    double unsafe_line_ratio = 0.0;  // percent
    int iterations_used = 0;
    std::string error;  // per-job failure, empty when none

    friend bool operator==(const JobRow&, const JobRow&) = default;
};

struct MetricsReport {
    std::size_t n_jobs = 0;
    std::size_t ca_eligible = 0;
    double ca = 0.0;
    double csr = 0.0;
    double ur = 0.0;
    double ulr = 0.0;
    std::vector<JobRow> rows;
};

// Throws EmptyDataset.
MetricsReport aggregate(std::span<const JobRow> rows);

JobRow make_row(std::string id, bool compiled, std::optional<int> ca, const UnsafeScan& scan, int iterations_used,
                std::string error = {});

nlohmann::json to_json(const MetricsReport& report);
// Reads rows and re-aggregates. Throws MalformedRecord, EmptyDataset.
MetricsReport report_from_json(const nlohmann::json& j);

std::string render_text(const MetricsReport& report);

// One line per sweep setting: iterations,n_jobs,ca,csr,ur,ulr
std::string sweep_csv(std::span<const std::pair<int, MetricsReport>> sweep);

}  // namespace c2r::metrics
