#include <algorithm>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "c2r/error.hpp"
#include "c2r/llm/gateway.hpp"

namespace c2r::llm {

namespace {

std::string excerpt(const std::string& body) {
    constexpr std::size_t kMax = 300;
    return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

RemoteBackend::RemoteBackend(RemoteSettings settings)
    : settings_(std::move(settings)), in_flight_(std::clamp<std::ptrdiff_t>(settings_.max_in_flight, 1, 256)) {
    const std::string& url = settings_.base_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint must include a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
    if (settings_.max_attempts < 1) settings_.max_attempts = 1;
}

nlohmann::json RemoteBackend::request_body(const GenerationRequest& request) {
    return nlohmann::json{
        {"model", request.model_name},
        {"messages",
         nlohmann::json::array({{{"role", "system"}, {"content", request.system_text}},
                                {{"role", "user"}, {"content", request.user_text}}})},
        {"temperature", request.temperature},
        {"top_p", request.top_p},
        {"max_tokens", request.max_tokens},
    };
}

GenerationResponse RemoteBackend::parse_response(const std::string& body) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error&) {
        throw ApiError(200, "unparseable response: " + excerpt(body), 1);
    }
    const auto choices = j.find("choices");
    if (choices == j.end() || !choices->is_array() || choices->empty())
        throw ApiError(200, "response has no choices: " + excerpt(body), 1);
    const auto& choice = (*choices)[0];

    GenerationResponse r;
    if (choice.contains("message") && choice["message"].contains("content") &&
        choice["message"]["content"].is_string())
        r.text = choice["message"]["content"].get<std::string>();
    else if (choice.contains("text") && choice["text"].is_string())
        r.text = choice["text"].get<std::string>();

    const std::string reason = choice.value("finish_reason", std::string("stop"));
    if (r.text.empty()) r.finish_reason = FinishReason::Error;
    else if (reason == "length") r.finish_reason = FinishReason::Length;
    else r.finish_reason = FinishReason::Stop;
    return r;
}

GenerationResponse RemoteBackend::generate(const GenerationRequest& request) {
    in_flight_.acquire();
    struct Release {
        std::counting_semaphore<256>& s;
        ~Release() { s.release(); }
    } release{in_flight_};

    const std::string body = request_body(request).dump();
    const std::string path = path_prefix_ + "/chat/completions";
    auto backoff = settings_.initial_backoff;
    std::string last_error;
    int last_status = 0;
    std::string last_body;

    for (int attempt = 1; attempt <= settings_.max_attempts; ++attempt) {
        httplib::Client client(scheme_host_port_);
        client.set_connection_timeout(settings_.timeout);
        client.set_read_timeout(settings_.timeout);
        client.set_write_timeout(settings_.timeout);
        httplib::Headers headers;
        if (!settings_.auth_token.empty()) headers.emplace("Authorization", "Bearer " + settings_.auth_token);

        auto res = client.Post(path, headers, body, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            last_status = 0;
        } else if (res->status == 200) {
            return parse_response(res->body);
        } else if (!retryable(res->status)) {
            throw ApiError(res->status, excerpt(res->body), attempt);
        } else {
            last_status = res->status;
            last_body = res->body;
        }
        if (attempt < settings_.max_attempts) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
    }
    if (last_status != 0) throw ApiError(last_status, excerpt(last_body), settings_.max_attempts);
    throw NetworkError("request to " + scheme_host_port_ + path + " failed after " +
                           std::to_string(settings_.max_attempts) + " attempts: " + last_error,
                       settings_.max_attempts);
}

}  // namespace c2r::llm
