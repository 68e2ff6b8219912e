#include <atomic>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "c2r/error.hpp"
#include "c2r/llm/gateway.hpp"
#include "c2r/util/files.hpp"
#include "paths.hpp"

using namespace c2r::llm;

namespace {

GenerationRequest req(std::string user) {
    GenerationRequest r;
    r.user_text = std::move(user);
    return r;
}

// A local chat-completions endpoint whose handler is supplied by the test.
class FakeServer {
public:
    explicit FakeServer(httplib::Server::Handler handler) {
        server_.Post("/v1/chat/completions", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeServer() {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

RemoteSettings fast(const std::string& url) {
    RemoteSettings s;
    s.base_url = url;
    s.auth_token = "test-token";
    s.timeout = std::chrono::seconds(5);
    s.initial_backoff = std::chrono::milliseconds(1);
    return s;
}

}  // namespace

TEST(Mock, OrderedScriptThenExhausted) {
    MockBackend m({"one", "two"});
    EXPECT_EQ(m.generate(req("x")).text, "one");
    EXPECT_EQ(m.generate(req("x")).text, "two");
    EXPECT_THROW(m.generate(req("x")), c2r::MockExhausted);
    EXPECT_EQ(m.calls(), 3u);
}

TEST(Mock, KeyedEntriesInInsertionOrder) {
    MockBackend m;
    m.add_keyed("scanf", "A");
    m.add_keyed_sequence("main", {"B1", "B2"});
    m.set_default("D");
    EXPECT_EQ(m.generate(req("int main() { scanf(); }")).text, "A");
    EXPECT_EQ(m.generate(req("int main() {}")).text, "B1");
    EXPECT_EQ(m.generate(req("int main() {}")).text, "B2");
    EXPECT_EQ(m.generate(req("other")).text, "D");
    // A used-up key does not fall through to the default.
    EXPECT_THROW(m.generate(req("int main() {}")), c2r::MockExhausted);
}

TEST(Mock, ExhaustedSequenceThrows) {
    MockBackend m;
    m.set_default("unused");
    m.add_keyed_sequence("k", {"only"});
    EXPECT_EQ(m.generate(req("k")).text, "only");
    EXPECT_THROW(m.generate(req("k")), c2r::MockExhausted);
}

TEST(Mock, EmptyTextIsErrorFinish) {
    MockBackend m({""});
    EXPECT_EQ(m.generate(req("x")).finish_reason, FinishReason::Error);
    MockBackend ok({"x"});
    EXPECT_EQ(ok.generate(req("x")).finish_reason, FinishReason::Stop);
}

TEST(Mock, JsonFormats) {
    auto a = MockBackend::from_json(nlohmann::json::array({"r1"}));
    EXPECT_EQ(a->generate(req("")).text, "r1");
    auto b = MockBackend::from_json({{"responses", {"r2"}}});
    EXPECT_EQ(b->generate(req("")).text, "r2");
    auto c = MockBackend::from_json(nlohmann::json::parse(
        R"({"table":[{"key":"k","response":"fixed"},{"key":"s","responses":["s1"]}],"default":"d"})"));
    EXPECT_EQ(c->generate(req("k")).text, "fixed");
    EXPECT_EQ(c->generate(req("k")).text, "fixed");
    EXPECT_EQ(c->generate(req("s")).text, "s1");
    EXPECT_EQ(c->generate(req("none")).text, "d");
    EXPECT_THROW(c->generate(req("s")), c2r::MockExhausted);
    EXPECT_THROW(MockBackend::from_json(42), c2r::ConfigError);
    EXPECT_THROW(MockBackend::from_json({{"table", 5}}), c2r::ConfigError);
    EXPECT_THROW(MockBackend::from_json(nlohmann::json::parse(R"({"table":[{"response":"x"}]})")), c2r::ConfigError);
}

TEST(Mock, FromFile) {
    const auto dir = c2r::test::scratch("mock_file");
    c2r::util::write_file(dir / "m.json", R"(["a"])");
    EXPECT_EQ(MockBackend::from_file(dir / "m.json")->generate(req("")).text, "a");
    c2r::util::write_file(dir / "bad.json", "{");
    EXPECT_THROW(MockBackend::from_file(dir / "bad.json"), c2r::ConfigError);
    EXPECT_THROW(MockBackend::from_file(dir / "none.json"), c2r::IoError);
}

TEST(Gateway, ValidatesDecodingParameters) {
    Gateway g(std::make_shared<MockBackend>(std::vector<std::string>{"a", "b", "c", "d"}), "m");
    auto r = req("x");
    r.temperature = -0.1;
    EXPECT_THROW(g.generate(r), std::invalid_argument);
    r = req("x");
    r.top_p = 0;
    EXPECT_THROW(g.generate(r), std::invalid_argument);
    r.top_p = 1.5;
    EXPECT_THROW(g.generate(r), std::invalid_argument);
    r = req("x");
    r.max_tokens = 0;
    EXPECT_THROW(g.generate(r), std::invalid_argument);
    EXPECT_EQ(g.generate(req("x")).text, "a");
}

TEST(Gateway, FillsModelName) {
    struct Capture : Backend {
        std::string model;
        GenerationResponse generate(const GenerationRequest& r) override {
            model = r.model_name;
            return {"ok", FinishReason::Stop, {}};
        }
    };
    auto cap = std::make_shared<Capture>();
    Gateway g(cap, "default-model");
    g.generate(req("x"));
    EXPECT_EQ(cap->model, "default-model");
    auto r = req("x");
    r.model_name = "explicit";
    g.generate(r);
    EXPECT_EQ(cap->model, "explicit");
}

TEST(Extract, PrefersRustBlock) {
    EXPECT_EQ(extract_code_block("text\n```c\nint x;\n```\n```rust\nfn main() {}\n```\n"), "fn main() {}");
    EXPECT_EQ(extract_code_block("```rs\nlet a = 1;\n\n```"), "let a = 1;");
    EXPECT_EQ(extract_code_block("```\nplain\n```"), "plain");
    EXPECT_EQ(extract_code_block("fn main() {}"), "fn main() {}");
}

TEST(Extract, Idempotent) {
    for (std::string s : {"```rust\nfn main() {\n}\n```", "no fences", "```\na\n```\n```rust\nb\n```", ""}) {
        const auto once = extract_code_block(s);
        EXPECT_EQ(extract_code_block(once), once);
    }
}

TEST(Remote, WireFormat) {
    GenerationRequest r;
    r.system_text = "sys";
    r.user_text = "usr";
    r.model_name = "m";
    r.max_tokens = 7;
    const auto j = RemoteBackend::request_body(r);
    EXPECT_EQ(j["model"], "m");
    EXPECT_EQ(j["messages"][0]["role"], "system");
    EXPECT_EQ(j["messages"][1]["content"], "usr");
    EXPECT_EQ(j["max_tokens"], 7);
    EXPECT_EQ(j["temperature"], 0.0);
    EXPECT_EQ(j["top_p"], 1.0);

    auto resp = RemoteBackend::parse_response(R"({"choices":[{"message":{"content":"hi"},"finish_reason":"length"}]})");
    EXPECT_EQ(resp.text, "hi");
    EXPECT_EQ(resp.finish_reason, FinishReason::Length);
    EXPECT_THROW(RemoteBackend::parse_response("{}"), c2r::ApiError);
    EXPECT_THROW(RemoteBackend::parse_response("<html>"), c2r::ApiError);
}

TEST(Remote, SuccessSendsBearerToken) {
    std::string auth;
    FakeServer server([&](const httplib::Request& rq, httplib::Response& rs) {
        auth = rq.get_header_value("Authorization");
        const auto body = nlohmann::json::parse(rq.body);
        rs.set_content(nlohmann::json{{"choices", {{{"message", {{"content", "echo:" + body["messages"][1]["content"].get<std::string>()}}},
                                                    {"finish_reason", "stop"}}}}}
                           .dump(),
                       "application/json");
    });
    RemoteBackend backend(fast(server.url()));
    const auto r = backend.generate(req("ping"));
    EXPECT_EQ(r.text, "echo:ping");
    EXPECT_EQ(auth, "Bearer test-token");
}

TEST(Remote, ServerErrorsRetriedThenApiError) {
    std::atomic<int> hits{0};
    FakeServer server([&](const httplib::Request&, httplib::Response& rs) {
        ++hits;
        rs.status = 500;
        rs.set_content("boom", "text/plain");
    });
    RemoteBackend backend(fast(server.url()));
    try {
        backend.generate(req("x"));
        FAIL();
    } catch (const c2r::ApiError& e) {
        EXPECT_EQ(e.status(), 500);
        EXPECT_EQ(e.attempts(), 3);
    }
    EXPECT_EQ(hits.load(), 3);
}

TEST(Remote, RecoversAfterTransientFailure) {
    std::atomic<int> hits{0};
    FakeServer server([&](const httplib::Request&, httplib::Response& rs) {
        if (++hits < 3) {
            rs.status = 429;
            return;
        }
        rs.set_content(R"({"choices":[{"message":{"content":"late"}}]})", "application/json");
    });
    RemoteBackend backend(fast(server.url()));
    EXPECT_EQ(backend.generate(req("x")).text, "late");
    EXPECT_EQ(hits.load(), 3);
}

TEST(Remote, ClientErrorsNotRetried) {
    std::atomic<int> hits{0};
    FakeServer server([&](const httplib::Request&, httplib::Response& rs) {
        ++hits;
        rs.status = 401;
    });
    RemoteBackend backend(fast(server.url()));
    try {
        backend.generate(req("x"));
        FAIL();
    } catch (const c2r::ApiError& e) {
        EXPECT_EQ(e.status(), 401);
        EXPECT_EQ(e.attempts(), 1);
    }
    EXPECT_EQ(hits.load(), 1);
}

TEST(Remote, UnreachableIsNetworkError) {
    int port;
    {
        httplib::Server s;
        port = s.bind_to_any_port("127.0.0.1");
    }
    auto settings = fast("http://127.0.0.1:" + std::to_string(port) + "/v1");
    RemoteBackend backend(settings);
    try {
        backend.generate(req("x"));
        FAIL();
    } catch (const c2r::NetworkError& e) {
        EXPECT_EQ(e.attempts(), 3);
    }
}

TEST(Remote, EndpointNeedsScheme) { EXPECT_THROW(RemoteBackend(fast("localhost:8000")), c2r::ConfigError); }
