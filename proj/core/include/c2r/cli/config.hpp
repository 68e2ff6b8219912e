#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace c2r::cli {

struct RunConfig {
    // backend
    std::string endpoint;
    std::string model;
    std::string auth_env = "C2R_API_KEY";
    std::string mock_script;
    std::string summary_endpoint;  // "better summary" mode: a separate model for summaries
    std::string summary_model;
    int max_tokens = 4096;
    double temperature = 0.0;
    double top_p = 1.0;
    int request_timeout_s = 120;
    int max_attempts = 3;
    int retry_backoff_ms = 1000;
    int llm_in_flight = 4;

    // translation
    std::string mode = "irene";
    int k = 1;
    double threshold = 100.0;
    int icl_examples = 4;
    int iterations = 1;
    std::uint64_t seed = 0;
    std::string summary_template;  // path; empty: bundled template

    // toolchain
    std::string rustc = "rustc";
    std::string rustc_version;  // pin checked at startup when non-empty
    std::string rustc_flags;    // space separated
    int compile_timeout_s = 60;
    int exec_timeout_s = 10;

    // parallelism
    int jobs = 0;           // worker threads; 0: CPU count
    int max_processes = 0;  // compiler + program processes; 0: CPU count

    // paths
    std::string corpus;
    std::string dataset;
    std::string out_dir = "out";

    // Throws ConfigError for unknown keys or unparseable values.
    void set(const std::string& key, const std::string& value);

    // key = value lines in declaration order, for run manifests.
    std::vector<std::pair<std::string, std::string>> entries() const;
};

// Flat "key = value" text; '#' starts a comment line. Throws ConfigError.
std::map<std::string, std::string> parse_config_text(const std::string& text);

// defaults < file < overrides. Throws IoError, ConfigError.
RunConfig resolve_config(const std::optional<std::filesystem::path>& file,
                         const std::map<std::string, std::string>& overrides);

std::vector<std::string> split_flags(const std::string& s);

}  // namespace c2r::cli
