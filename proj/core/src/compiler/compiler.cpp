#include "c2r/compiler/compiler.hpp"

#include <algorithm>
#include <cerrno>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "c2r/error.hpp"
#include "c2r/util/files.hpp"
#include "c2r/util/process.hpp"

namespace c2r::compiler {

std::size_t CompileOutcome::error_count() const {
    std::size_t n = 0;
    for (const auto& d : diagnostics) n += d.level == Level::Error;
    return n;
}

std::vector<Diagnostic> parse_diagnostics(std::string_view text) {
    std::vector<Diagnostic> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty() || line.front() != '{') continue;

        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) continue;
        if (j.contains("$message_type") && j["$message_type"] != "diagnostic") continue;

        const std::string level = j.value("level", "");
        Diagnostic d;
        if (level == "error") d.level = Level::Error;
        else if (level == "warning") d.level = Level::Warning;
        else continue;

        d.message = j.value("message", "");
        if (d.level == Level::Error && d.message.rfind("aborting due to", 0) == 0) continue;
        if (auto c = j.find("code"); c != j.end() && c->is_object() && (*c)["code"].is_string())
            d.code = (*c)["code"].get<std::string>();
        if (auto r = j.find("rendered"); r != j.end() && r->is_string()) d.rendered = r->get<std::string>();
        if (d.rendered.empty()) d.rendered = level + ": " + d.message;
        if (auto spans = j.find("spans"); spans != j.end() && spans->is_array()) {
            for (const auto& s : *spans) {
                if (!s.value("is_primary", false)) continue;
                d.primary_span = SourceLocation{s.value("file_name", ""), s.value("line_start", 0),
                                                s.value("column_start", 0)};
                break;
            }
        }
        out.push_back(std::move(d));
    }
    return out;
}

RustCompiler::RustCompiler(RustcSettings settings) : settings_(std::move(settings)) {}

namespace {

util::ProcessResult run_tool(const util::ProcessSpec& spec) {
    util::ProcessSlot slot(util::ProcessLimiter::global());
    try {
        return util::run_process(spec);
    } catch (const SpawnError& e) {
        if (e.errno_value() == ENOENT) throw ToolchainMissing("Rust compiler not found: " + spec.argv.front());
        throw;
    }
}

}  // namespace

std::string RustCompiler::version() {
    util::ProcessSpec spec;
    spec.argv = {settings_.rustc, "--version"};
    spec.timeout = std::chrono::seconds(30);
    const auto r = run_tool(spec);
    if (r.exit_code != 0) throw ToolchainMissing("`" + settings_.rustc + " --version` failed: " + r.stderr_text);
    return util::trim(r.stdout_text);
}

std::string RustCompiler::assert_version(std::string_view pin) {
    std::string v = version();
    if (!pin.empty() && v.find(pin) == std::string::npos)
        throw ConfigError("toolchain mismatch: expected rustc " + std::string(pin) + ", found \"" + v + "\"");
    return v;
}

CompileOutcome RustCompiler::compile(const std::string& rust_code, const std::filesystem::path& workdir) {
    std::error_code ec;
    std::filesystem::create_directories(workdir, ec);
    const auto artifact = workdir / "main";
    std::filesystem::remove(artifact, ec);
    util::write_file(workdir / "main.rs", rust_code);

    util::ProcessSpec spec;
    spec.argv = {settings_.rustc, "--edition", settings_.edition, "--error-format=json", "-o", "main"};
    spec.argv.insert(spec.argv.end(), settings_.extra_args.begin(), settings_.extra_args.end());
    spec.argv.push_back("main.rs");
    spec.cwd = workdir;
    spec.timeout = settings_.timeout;
    const auto r = run_tool(spec);

    CompileOutcome outcome;
    outcome.diagnostics = parse_diagnostics(r.stderr_text);
    auto synthetic = [&](std::string message) {
        Diagnostic d;
        d.level = Level::Error;
        d.message = std::move(message);
        d.rendered = "error: " + d.message;
        outcome.diagnostics.push_back(std::move(d));
    };
    if (r.timed_out) {
        synthetic("compilation timed out after " + std::to_string(settings_.timeout.count()) + " ms");
    } else if (r.exit_code != 0 && outcome.error_count() == 0) {
        synthetic("compiler exited with status " + std::to_string(r.exit_code) +
                  (r.term_signal ? " (signal " + std::to_string(r.term_signal) + ")" : ""));
    } else if (r.exit_code == 0 && outcome.error_count() == 0 && !std::filesystem::exists(artifact)) {
        synthetic("compiler produced no executable");
    }
    outcome.success = outcome.error_count() == 0;
    if (outcome.success) outcome.artifact_path = artifact;
    else std::filesystem::remove(artifact, ec);
    return outcome;
}

std::string build_repair_prompt(std::string_view rust_code, std::span<const Diagnostic> diagnostics,
                                std::string_view original_c) {
    std::vector<const Diagnostic*> errors;
    for (const auto& d : diagnostics)
        if (d.level == Level::Error) errors.push_back(&d);
    if (errors.empty()) throw std::invalid_argument("build_repair_prompt needs at least one error diagnostic");

    std::string out = "The following Rust program fails to compile.\n\n### Rust code\n```rust\n";
    out += rust_code;
    if (out.back() != '\n') out += '\n';
    out += "```\n\n### Compiler errors\n";
    const std::size_t shown = std::min(errors.size(), kRepairDiagnosticCap);
    if (errors.size() > shown)
        out += "(showing the first " + std::to_string(shown) + " of " + std::to_string(errors.size()) +
               " errors)\n";
    for (std::size_t i = 0; i < shown; ++i) {
        out += errors[i]->rendered;
        if (out.back() != '\n') out += '\n';
        out += '\n';
    }
    out += "### Original C code\n```c\n";
    out += original_c;
    if (out.back() != '\n') out += '\n';
    out += "```\n\nRevise the translation to fix every error above while keeping the behavior of the C program. "
           "Output the complete corrected Rust program in a single ```rust code block.";
    return out;
}

RefinementTrace refine(const llm::Gateway& gateway, CompilerBackend& compiler, std::string_view original_c,
                       std::string initial_rust, int max_iterations, const RefineOptions& options) {
    if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
    RefinementTrace trace;
    auto build = [&](Attempt attempt) {
        const auto dir = options.workdir / ("attempt_" + std::to_string(trace.attempts.size()));
        attempt.outcome = compiler.compile(attempt.rust_code, dir);
        trace.attempts.push_back(std::move(attempt));
        return trace.attempts.back().outcome.success;
    };

    Attempt first;
    first.rust_code = std::move(initial_rust);
    bool ok = build(std::move(first));
    for (int iteration = 0; !ok && iteration < max_iterations; ++iteration) {
        const Attempt& last = trace.attempts.back();
        Attempt next;
        llm::GenerationRequest request;
        request.system_text = "You are an expert Rust programmer who repairs compiler errors.";
        request.user_text = build_repair_prompt(last.rust_code, last.outcome.diagnostics, original_c);
        request.temperature = options.temperature;
        request.top_p = options.top_p;
        request.max_tokens = options.max_tokens;
        request.model_name = options.model_name.empty() ? gateway.model_name() : options.model_name;
        try {
            next.raw_reply = gateway.generate(request).text;
        } catch (const std::exception& e) {
            trace.error = e.what();
            break;
        }
        next.request = std::move(request);
        next.rust_code = llm::extract_code_block(next.raw_reply);
        ok = build(std::move(next));
    }
    trace.iterations_used = static_cast<int>(trace.attempts.size()) - 1;
    trace.final_success = trace.attempts.back().outcome.success;
    return trace;
}

nlohmann::json to_json(const Diagnostic& d) {
    nlohmann::json j = {{"level", d.level == Level::Error ? "error" : "warning"},
                        {"code", d.code ? nlohmann::json(*d.code) : nlohmann::json(nullptr)},
                        {"message", d.message},
                        {"rendered", d.rendered}};
    if (d.primary_span)
        j["primary_span"] = {{"file", d.primary_span->file},
                             {"line", d.primary_span->line},
                             {"column", d.primary_span->column}};
    else
        j["primary_span"] = nullptr;
    return j;
}

nlohmann::json to_json(const RefinementTrace& trace) {
    nlohmann::json attempts = nlohmann::json::array();
    for (const auto& a : trace.attempts) {
        nlohmann::json diags = nlohmann::json::array();
        for (const auto& d : a.outcome.diagnostics) diags.push_back(to_json(d));
        nlohmann::json item = {{"rust_code", a.rust_code}, {"success", a.outcome.success}, {"diagnostics", diags}};
        if (a.request) {
            item["repair_request"] = {{"model", a.request->model_name},
                                      {"system_text", a.request->system_text},
                                      {"user_text", a.request->user_text}};
            item["raw_reply"] = a.raw_reply;
        }
        attempts.push_back(std::move(item));
    }
    return {{"attempts", attempts},
            {"iterations_used", trace.iterations_used},
            {"final_success", trace.final_success},
            {"error", trace.error ? nlohmann::json(*trace.error) : nlohmann::json(nullptr)}};
}

}  // namespace c2r::compiler
