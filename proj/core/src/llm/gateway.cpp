#include "c2r/llm/gateway.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "c2r/error.hpp"
#include "c2r/util/files.hpp"

namespace c2r::llm {

std::string_view finish_reason_name(FinishReason reason) {
    switch (reason) {
        case FinishReason::Stop: return "stop";
        case FinishReason::Length: return "length";
        case FinishReason::Error: return "error";
    }
    return "error";
}

// ---- mock ----------------------------------------------------------------------

MockBackend::MockBackend(std::vector<std::string> script) : script_(script.begin(), script.end()) {}

void MockBackend::add_keyed(std::string key, std::string response) {
    std::lock_guard lock(mutex_);
    table_.push_back(Entry{std::move(key), std::move(response), {}});
}

void MockBackend::add_keyed_sequence(std::string key, std::vector<std::string> responses) {
    std::lock_guard lock(mutex_);
    table_.push_back(Entry{std::move(key), std::nullopt, {responses.begin(), responses.end()}});
}

std::unique_ptr<MockBackend> MockBackend::from_json(const nlohmann::json& j) {
    auto strings = [](const nlohmann::json& arr, const char* what) {
        if (!arr.is_array()) throw ConfigError(std::string("mock script: \"") + what + "\" must be an array");
        std::vector<std::string> out;
        for (const auto& v : arr) {
            if (!v.is_string()) throw ConfigError(std::string("mock script: \"") + what + "\" entries must be strings");
            out.push_back(v.get<std::string>());
        }
        return out;
    };

    if (j.is_array()) return std::make_unique<MockBackend>(strings(j, "script"));
    if (!j.is_object()) throw ConfigError("mock script must be a JSON array or object");

    auto mock = std::make_unique<MockBackend>();
    if (auto it = j.find("responses"); it != j.end()) {
        for (auto& r : strings(*it, "responses")) mock->script_.push_back(std::move(r));
    }
    if (auto it = j.find("table"); it != j.end()) {
        if (!it->is_array()) throw ConfigError("mock script: \"table\" must be an array");
        for (const auto& e : *it) {
            if (!e.is_object() || !e.contains("key") || !e["key"].is_string())
                throw ConfigError("mock script: table entries need a string \"key\"");
            const std::string key = e["key"].get<std::string>();
            if (e.contains("response")) {
                if (!e["response"].is_string()) throw ConfigError("mock script: \"response\" must be a string");
                mock->add_keyed(key, e["response"].get<std::string>());
            } else if (e.contains("responses")) {
                mock->add_keyed_sequence(key, strings(e["responses"], "responses"));
            } else {
                throw ConfigError("mock script: table entry for \"" + key + "\" has no response");
            }
        }
    }
    if (auto it = j.find("default"); it != j.end()) {
        if (!it->is_string()) throw ConfigError("mock script: \"default\" must be a string");
        mock->default_ = it->get<std::string>();
    }
    return mock;
}

std::unique_ptr<MockBackend> MockBackend::from_file(const std::filesystem::path& path) {
    const std::string text = util::read_file(path);
    try {
        return from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("mock script " + path.string() + ": " + e.what());
    }
}

GenerationResponse MockBackend::generate(const GenerationRequest& request) {
    std::lock_guard lock(mutex_);
    ++calls_;
    auto reply = [](std::string text) {
        GenerationResponse r;
        r.finish_reason = text.empty() ? FinishReason::Error : FinishReason::Stop;
        r.text = std::move(text);
        return r;
    };
    for (auto& entry : table_) {
        if (request.user_text.find(entry.key) == std::string::npos) continue;
        if (entry.fixed) return reply(*entry.fixed);
        if (entry.queue.empty()) throw MockExhausted("mock responses exhausted for key \"" + entry.key + "\"");
        std::string text = std::move(entry.queue.front());
        entry.queue.pop_front();
        return reply(std::move(text));
    }
    if (!script_.empty()) {
        std::string text = std::move(script_.front());
        script_.pop_front();
        return reply(std::move(text));
    }
    if (default_) return reply(*default_);
    throw MockExhausted("mock script exhausted after " + std::to_string(calls_ - 1) + " responses");
}

std::size_t MockBackend::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

// ---- gateway --------------------------------------------------------------------

Gateway::Gateway(std::shared_ptr<Backend> backend, std::string model_name)
    : backend_(std::move(backend)), model_name_(std::move(model_name)) {
    if (!backend_) throw std::invalid_argument("gateway needs a backend");
}

GenerationResponse Gateway::generate(GenerationRequest request) const {
    if (!(request.temperature >= 0.0)) throw std::invalid_argument("temperature must be >= 0");
    if (!(request.top_p > 0.0 && request.top_p <= 1.0)) throw std::invalid_argument("top_p must be in (0, 1]");
    if (request.max_tokens <= 0) throw std::invalid_argument("max_tokens must be positive");
    if (request.model_name.empty()) request.model_name = model_name_;

    const auto start = std::chrono::steady_clock::now();
    GenerationResponse response = backend_->generate(request);
    response.latency =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    return response;
}

// ---- code extraction ------------------------------------------------------------

std::string extract_code_block(std::string_view text) {
    struct Block {
        std::string tag;
        std::string_view body;
    };
    std::vector<Block> blocks;
    std::size_t pos = 0;
    while (true) {
        const std::size_t open = text.find("```", pos);
        if (open == std::string_view::npos) break;
        const std::size_t info_end = text.find('\n', open + 3);
        if (info_end == std::string_view::npos) break;
        const std::size_t close = text.find("```", info_end + 1);
        if (close == std::string_view::npos) break;

        std::string tag;
        for (std::size_t i = open + 3; i < info_end; ++i) {
            const unsigned char c = static_cast<unsigned char>(text[i]);
            if (std::isspace(c)) {
                if (tag.empty()) continue;
                break;
            }
            tag += static_cast<char>(std::tolower(c));
        }
        blocks.push_back(Block{std::move(tag), text.substr(info_end + 1, close - info_end - 1)});
        pos = close + 3;
    }
    if (blocks.empty()) return std::string(text);

    auto chosen = std::find_if(blocks.begin(), blocks.end(),
                               [](const Block& b) { return b.tag == "rust" || b.tag == "rs"; });
    if (chosen == blocks.end()) chosen = blocks.begin();
    std::string_view body = chosen->body;
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.remove_suffix(1);
    return std::string(body);
}

}  // namespace c2r::llm
