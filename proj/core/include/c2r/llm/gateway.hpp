#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace c2r::llm {

struct GenerationRequest {
    std::string system_text;
    std::string user_text;
    double temperature = 0.0;
    double top_p = 1.0;
    int max_tokens = 4096;
    std::string model_name;
};

enum class FinishReason { Stop, Length, Error };

std::string_view finish_reason_name(FinishReason reason);

struct GenerationResponse {
    std::string text;
    FinishReason finish_reason = FinishReason::Stop;
    std::chrono::milliseconds latency{0};
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual GenerationResponse generate(const GenerationRequest& request) = 0;
};

// Canned responses for offline runs.
//
// Script file formats (JSON):
//   ["r1", "r2"]                      ordered script
//   {"responses": ["r1", "r2"]}        same
//   {"table": [{"key": "scanf", "response": "A"},
//              {"key": "main", "responses": ["B1", "B2"]}],
//    "default": "fallback"}
//
// Table entries are tried in file order; the first whose key is a substring
// of user_text answers. "response" answers every time, "responses" are
// consumed one per call. Unmatched requests fall through to the ordered
// script, then "default". Anything left unanswered throws MockExhausted.
class MockBackend : public Backend {
public:
    struct Entry {
        std::string key;
        std::optional<std::string> fixed;
        std::deque<std::string> queue;
    };

    MockBackend() = default;
    explicit MockBackend(std::vector<std::string> script);

    static std::unique_ptr<MockBackend> from_json(const nlohmann::json& j);
    // Throws IoError, ConfigError.
    static std::unique_ptr<MockBackend> from_file(const std::filesystem::path& path);

    void add_keyed(std::string key, std::string response);
    void add_keyed_sequence(std::string key, std::vector<std::string> responses);
    void set_default(std::string response) { default_ = std::move(response); }

    GenerationResponse generate(const GenerationRequest& request) override;

    std::size_t calls() const;

private:
    mutable std::mutex mutex_;
    std::deque<std::string> script_;
    std::vector<Entry> table_;
    std::optional<std::string> default_;
    std::size_t calls_ = 0;
};

struct RemoteSettings {
    std::string base_url;  // e.g. http://localhost:8000/v1
    std::string auth_token;
    std::chrono::seconds timeout{120};
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};
    std::ptrdiff_t max_in_flight = 4;
};

// POST <base_url>/chat/completions, chat-completions wire format.
class RemoteBackend : public Backend {
public:
    explicit RemoteBackend(RemoteSettings settings);
    GenerationResponse generate(const GenerationRequest& request) override;

    // Exposed for tests.
    static nlohmann::json request_body(const GenerationRequest& request);
    static GenerationResponse parse_response(const std::string& body);

private:
    RemoteSettings settings_;
    std::string scheme_host_port_;
    std::string path_prefix_;
    std::counting_semaphore<256> in_flight_;
};

// Validates requests and fills in the configured model name. Shareable
// across threads when the backend is.
class Gateway {
public:
    Gateway(std::shared_ptr<Backend> backend, std::string model_name = {});

    // Throws std::invalid_argument on out-of-range decoding parameters, and
    // whatever the backend throws.
    GenerationResponse generate(GenerationRequest request) const;

    const std::string& model_name() const { return model_name_; }

private:
    std::shared_ptr<Backend> backend_;
    std::string model_name_;
};

// First ```rust / ```rs block, else the first fenced block, else the text
// unchanged. Fence lines and trailing newlines of the block are dropped.
std::string extract_code_block(std::string_view text);

}  // namespace c2r::llm
