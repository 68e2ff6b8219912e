#include "c2r/cli/config.hpp"

#include <charconv>
#include <limits>
#include <sstream>

#include "c2r/error.hpp"
#include "c2r/util/files.hpp"

namespace c2r::cli {

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    std::from_chars_result r{};
    if constexpr (std::is_floating_point_v<T>) {
        try {
            std::size_t used = 0;
            out = static_cast<T>(std::stod(value, &used));
            if (used != value.size()) throw std::invalid_argument(value);
            return out;
        } catch (const std::exception&) {
            throw ConfigError("config key \"" + key + "\": not a number: \"" + value + "\"");
        }
    } else {
        r = std::from_chars(first, last, out);
    }
    if (r.ec != std::errc() || r.ptr != last)
        throw ConfigError("config key \"" + key + "\": not an integer: \"" + value + "\"");
    return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    auto str = [&](std::string& field) { field = value; };
    auto num = [&](auto& field) { field = parse_number<std::decay_t<decltype(field)>>(key, value); };
    if (key == "endpoint") str(endpoint);
    else if (key == "model") str(model);
    else if (key == "auth_env") str(auth_env);
    else if (key == "mock_script") str(mock_script);
    else if (key == "summary_endpoint") str(summary_endpoint);
    else if (key == "summary_model") str(summary_model);
    else if (key == "max_tokens") num(max_tokens);
    else if (key == "temperature") num(temperature);
    else if (key == "top_p") num(top_p);
    else if (key == "request_timeout_s") num(request_timeout_s);
    else if (key == "max_attempts") num(max_attempts);
    else if (key == "retry_backoff_ms") num(retry_backoff_ms);
    else if (key == "llm_in_flight") num(llm_in_flight);
    else if (key == "mode") str(mode);
    else if (key == "k") num(k);
    else if (key == "threshold") num(threshold);
    else if (key == "icl_examples") num(icl_examples);
    else if (key == "iterations") num(iterations);
    else if (key == "seed") num(seed);
    else if (key == "summary_template") str(summary_template);
    else if (key == "rustc") str(rustc);
    else if (key == "rustc_version") str(rustc_version);
    else if (key == "rustc_flags") str(rustc_flags);
    else if (key == "compile_timeout_s") num(compile_timeout_s);
    else if (key == "exec_timeout_s") num(exec_timeout_s);
    else if (key == "jobs") num(jobs);
    else if (key == "max_processes") num(max_processes);
    else if (key == "corpus") str(corpus);
    else if (key == "dataset") str(dataset);
    else if (key == "out_dir") str(out_dir);
    else throw ConfigError("unknown config key \"" + key + "\"");

    if (key == "iterations" && (iterations < 0 || iterations > 5))
        throw ConfigError("iterations must be between 0 and 5");
    if (key == "k" && k < 1) throw ConfigError("k must be >= 1");
    if (key == "threshold" && threshold < 0) throw ConfigError("threshold must be >= 0");
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
    auto d = [](double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    };
    return {
        {"endpoint", endpoint},
        {"model", model},
        {"auth_env", auth_env},
        {"mock_script", mock_script},
        {"summary_endpoint", summary_endpoint},
        {"summary_model", summary_model},
        {"max_tokens", std::to_string(max_tokens)},
        {"temperature", d(temperature)},
        {"top_p", d(top_p)},
        {"request_timeout_s", std::to_string(request_timeout_s)},
        {"max_attempts", std::to_string(max_attempts)},
        {"retry_backoff_ms", std::to_string(retry_backoff_ms)},
        {"llm_in_flight", std::to_string(llm_in_flight)},
        {"mode", mode},
        {"k", std::to_string(k)},
        {"threshold", d(threshold)},
        {"icl_examples", std::to_string(icl_examples)},
        {"iterations", std::to_string(iterations)},
        {"seed", std::to_string(seed)},
        {"summary_template", summary_template},
        {"rustc", rustc},
        {"rustc_version", rustc_version},
        {"rustc_flags", rustc_flags},
        {"compile_timeout_s", std::to_string(compile_timeout_s)},
        {"exec_timeout_s", std::to_string(exec_timeout_s)},
        {"jobs", std::to_string(jobs)},
        {"max_processes", std::to_string(max_processes)},
        {"corpus", corpus},
        {"dataset", dataset},
        {"out_dir", out_dir},
    };
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = util::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
        const std::string key = util::trim(t.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
        out[key] = util::trim(t.substr(eq + 1));
    }
    return out;
}

RunConfig resolve_config(const std::optional<std::filesystem::path>& file,
                         const std::map<std::string, std::string>& overrides) {
    RunConfig config;
    if (file)
        for (const auto& [k, v] : parse_config_text(util::read_file(*file))) config.set(k, v);
    for (const auto& [k, v] : overrides) config.set(k, v);
    return config;
}

std::vector<std::string> split_flags(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

}  // namespace c2r::cli
