#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "c2r/llm/gateway.hpp"

namespace c2r::compiler {

enum class Level { Error, Warning };

struct SourceLocation {
    std::string file;
    int line = 0;
    int column = 0;

    friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

struct Diagnostic {
    Level level = Level::Error;
    std::optional<std::string> code;  // "E0308"
    std::string message;
    std::string rendered;
    std::optional<SourceLocation> primary_span;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct CompileOutcome {
    bool success = false;
    std::vector<Diagnostic> diagnostics;
    std::optional<std::filesystem::path> artifact_path;

    std::size_t error_count() const;
};

// One JSON object per line; non-JSON lines and notes/help/failure-notes are
// skipped, as are the "aborting due to ..." summaries.
std::vector<Diagnostic> parse_diagnostics(std::string_view compiler_stderr);

class CompilerBackend {
public:
    virtual ~CompilerBackend() = default;
    // Writes main.rs into workdir and builds it there. Throws ToolchainMissing.
    virtual CompileOutcome compile(const std::string& rust_code, const std::filesystem::path& workdir) = 0;
    virtual std::string version() = 0;
};

struct RustcSettings {
    std::string rustc = "rustc";
    std::string edition = "2021";
    std::vector<std::string> extra_args;
    std::chrono::milliseconds timeout{60'000};
};

class RustCompiler : public CompilerBackend {
public:
    explicit RustCompiler(RustcSettings settings = {});
    CompileOutcome compile(const std::string& rust_code, const std::filesystem::path& workdir) override;
    // "rustc 1.81.0 (...)". Throws ToolchainMissing.
    std::string version() override;

    // Throws ToolchainMissing, ConfigError when `pin` is non-empty and the
    // reported version does not contain it.
    std::string assert_version(std::string_view pin);

private:
    RustcSettings settings_;
};

inline constexpr std::size_t kRepairDiagnosticCap = 10;

// Throws std::invalid_argument when diagnostics contain no error.
std::string build_repair_prompt(std::string_view rust_code, std::span<const Diagnostic> diagnostics,
                                std::string_view original_c);

struct Attempt {
    std::string rust_code;
    CompileOutcome outcome;
    std::optional<llm::GenerationRequest> request;  // repair request that produced it
    std::string raw_reply;
};

struct RefinementTrace {
    std::vector<Attempt> attempts;
    int iterations_used = 0;
    bool final_success = false;
    std::optional<std::string> error;  // gateway failure that cut the loop short
};

struct RefineOptions {
    std::filesystem::path workdir;  // attempt i builds in workdir/attempt_<i>
    std::string model_name;
    int max_tokens = 4096;
    double temperature = 0.0;
    double top_p = 1.0;
};

// Throws std::invalid_argument for max_iterations < 0; ToolchainMissing
// propagates. Gateway errors end the trace instead of propagating.
RefinementTrace refine(const llm::Gateway& gateway, CompilerBackend& compiler, std::string_view original_c,
                       std::string initial_rust, int max_iterations, const RefineOptions& options);

nlohmann::json to_json(const Diagnostic& d);
nlohmann::json to_json(const RefinementTrace& trace);

}  // namespace c2r::compiler
