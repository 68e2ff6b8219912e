#include "c2r/cli/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

#include "c2r/error.hpp"
#include "c2r/util/files.hpp"
#include "c2r/util/parallel.hpp"
#include "c2r/util/process.hpp"

namespace c2r::cli {

namespace fs = std::filesystem;

namespace {

std::size_t worker_count(int configured) {
    if (configured > 0) return static_cast<std::size_t>(configured);
    return std::max(1u, std::thread::hardware_concurrency());
}

std::shared_ptr<llm::Backend> remote(const RunConfig& config, const std::string& endpoint) {
    llm::RemoteSettings s;
    s.base_url = endpoint;
    if (const char* token = std::getenv(config.auth_env.c_str())) s.auth_token = token;
    s.timeout = std::chrono::seconds(config.request_timeout_s);
    s.max_attempts = config.max_attempts;
    s.initial_backoff = std::chrono::milliseconds(config.retry_backoff_ms);
    s.max_in_flight = config.llm_in_flight;
    return std::make_shared<llm::RemoteBackend>(std::move(s));
}

}  // namespace

std::string safe_file_name(std::string_view id) {
    std::string out;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                        c == '_' || c == '.';
        out += ok ? c : '_';
    }
    if (out.empty() || out == "." || out == "..") out = "_" + out;
    return out;
}

std::shared_ptr<llm::Backend> make_backend(const RunConfig& config) {
    if (!config.mock_script.empty()) return std::shared_ptr<llm::Backend>(llm::MockBackend::from_file(config.mock_script));
    if (!config.endpoint.empty()) return remote(config, config.endpoint);
    throw ConfigError("no model backend configured: set endpoint or mock_script");
}

std::unique_ptr<llm::Gateway> make_summary_gateway(const RunConfig& config) {
    if (config.summary_endpoint.empty() && config.summary_model.empty()) return nullptr;
    if (!config.mock_script.empty()) return nullptr;
    const std::string endpoint = config.summary_endpoint.empty() ? config.endpoint : config.summary_endpoint;
    if (endpoint.empty()) throw ConfigError("summary_model needs an endpoint");
    return std::make_unique<llm::Gateway>(remote(config, endpoint),
                                          config.summary_model.empty() ? config.model : config.summary_model);
}

compiler::RustcSettings rustc_settings(const RunConfig& config) {
    compiler::RustcSettings s;
    s.rustc = config.rustc;
    s.extra_args = split_flags(config.rustc_flags);
    s.timeout = std::chrono::seconds(config.compile_timeout_s);
    return s;
}

translator::TranslatorConfig translator_config(const RunConfig& config) {
    translator::TranslatorConfig t;
    t.mode = translator::parse_mode(config.mode);
    t.k = static_cast<std::size_t>(config.k);
    t.threshold = config.threshold;
    t.icl_examples = static_cast<std::size_t>(std::max(0, config.icl_examples));
    t.seed = config.seed;
    t.model_name = config.model;
    t.max_tokens = config.max_tokens;
    t.temperature = config.temperature;
    t.top_p = config.top_p;
    t.summary.max_tokens = config.max_tokens;
    if (!config.summary_template.empty()) t.summary.prompt_template = util::read_file(config.summary_template);
    return t;
}

compiler::RefinementTrace truncate_trace(const compiler::RefinementTrace& trace, int cap) {
    const std::size_t keep = std::min(trace.attempts.size(), static_cast<std::size_t>(std::max(cap, 0)) + 1);
    compiler::RefinementTrace out;
    out.attempts.assign(trace.attempts.begin(), trace.attempts.begin() + static_cast<std::ptrdiff_t>(keep));
    out.iterations_used = static_cast<int>(keep) - 1;
    out.final_success = out.attempts.back().outcome.success;
    // The gateway failure happened after the last recorded attempt; it is
    // only part of this trace if that attempt was still within the cap.
    if (trace.error && keep == trace.attempts.size() && out.iterations_used < cap) out.error = trace.error;
    return out;
}

nlohmann::json run_manifest(const RunConfig& config, const std::string& toolchain, int iterations,
                            std::span<const translator::TranslationJob> jobs) {
    nlohmann::json ids = nlohmann::json::array();
    for (const auto& j : jobs) ids.push_back(j.id);
    return {{"mode", config.mode},
            {"model", config.model},
            {"seed", config.seed},
            {"iterations", iterations},
            {"k", config.k},
            {"threshold", config.threshold},
            {"icl_examples", config.icl_examples},
            {"toolchain", toolchain},
            {"dataset", config.dataset},
            {"corpus", config.corpus},
            {"jobs", ids}};
}

std::string report_file_text(const metrics::MetricsReport& report, const nlohmann::json& manifest) {
    nlohmann::json j = metrics::to_json(report);
    j["run"] = manifest;
    return j.dump(2) + "\n";
}

std::vector<metrics::MetricsReport> run_translation(const RunContext& ctx,
                                                    std::span<const translator::TranslationJob> jobs,
                                                    std::span<const int> caps, const fs::path& out_dir) {
    if (caps.empty()) throw std::invalid_argument("run_translation: no iteration caps");
    const int max_cap = *std::max_element(caps.begin(), caps.end());
    const std::size_t workers = worker_count(ctx.config.jobs);
    auto tconf = translator_config(ctx.config);
    const auto summary_gateway = make_summary_gateway(ctx.config);
    tconf.summary_gateway = summary_gateway.get();
    std::mutex log_mutex;
    auto log = [&](const std::string& line) {
        if (!ctx.log) return;
        std::lock_guard lock(log_mutex);
        *ctx.log << line << '\n';
    };

    util::TempDir work("c2r-run-");
    std::vector<JobRun> runs(jobs.size());
    util::parallel_for(jobs.size(), workers, [&](std::size_t i) {
        JobRun& run = runs[i];
        run.job = jobs[i];
        try {
            run.audit = translator::translate_once(ctx.gateway, ctx.index, run.job, tconf);
        } catch (const std::exception& e) {
            run.error = std::string("translation failed: ") + e.what();
            log("[" + run.job.id + "] " + run.error);
            return;
        }
        for (const auto& w : run.audit->warnings) log("[" + run.job.id + "] warning: " + w);
        compiler::RefineOptions options;
        options.workdir = work.path() / safe_file_name(run.job.id);
        options.model_name = ctx.config.model;
        options.max_tokens = ctx.config.max_tokens;
        options.temperature = ctx.config.temperature;
        options.top_p = ctx.config.top_p;
        run.trace = compiler::refine(ctx.gateway, ctx.compiler, run.job.c_code, run.audit->rust_code, max_cap, options);
    });

    // Execution result per (job, attempt); a job's attempts are shared by every cap.
    std::vector<std::map<std::size_t, std::pair<std::optional<int>, std::string>>> exec_cache(jobs.size());
    const auto timeout = std::chrono::milliseconds(std::chrono::seconds(ctx.config.exec_timeout_s));

    std::vector<metrics::MetricsReport> reports;
    std::vector<std::pair<int, metrics::MetricsReport>> sweep;
    for (int cap : caps) {
        const fs::path dir = caps.size() > 1 ? out_dir / ("iter_" + std::to_string(cap)) : out_dir;
        std::vector<metrics::JobRow> rows(jobs.size());
        std::vector<nlohmann::json> audits(jobs.size());
        std::vector<std::optional<std::string>> codes(jobs.size());

        util::parallel_for(jobs.size(), workers, [&](std::size_t i) {
            const JobRun& run = runs[i];
            const auto& cases = run.job.test_cases;
            nlohmann::json audit = {{"id", run.job.id}};
            if (!run.trace) {
                rows[i] = metrics::make_row(run.job.id, false, cases.empty() ? std::nullopt : std::optional<int>(0),
                                            metrics::scan_unsafe(""), 0, run.error);
                audit["translation"] = nullptr;
                audit["refinement"] = nullptr;
            } else {
                const auto trace = truncate_trace(*run.trace, cap);
                const auto& last = trace.attempts.back();
                std::optional<int> ca;
                std::string error = trace.error ? "refinement stopped: " + *trace.error : "";
                if (!cases.empty()) ca = 0;
                if (last.outcome.success && !cases.empty()) {
                    auto& cache = exec_cache[i];
                    const std::size_t attempt = trace.attempts.size() - 1;
                    auto it = cache.find(attempt);
                    if (it == cache.end()) {
                        std::pair<std::optional<int>, std::string> result;
                        try {
                            result.first = metrics::evaluate_executable(*last.outcome.artifact_path, cases, timeout);
                        } catch (const SpawnError& e) {
                            result = {0, std::string("execution failed: ") + e.what()};
                        }
                        it = cache.emplace(attempt, std::move(result)).first;
                    }
                    ca = it->second.first;
                    if (!it->second.second.empty()) error = it->second.second;
                }
                rows[i] = metrics::make_row(run.job.id, last.outcome.success, ca, metrics::scan_unsafe(last.rust_code),
                                            trace.iterations_used, error);
                codes[i] = last.rust_code;
                audit["translation"] = translator::to_json(*run.audit);
                audit["refinement"] = compiler::to_json(trace);
            }
            audit["result"] = {{"compiled", rows[i].compiled},
                               {"ca", rows[i].ca ? nlohmann::json(*rows[i].ca) : nlohmann::json(nullptr)},
                               {"error", rows[i].error}};
            audits[i] = std::move(audit);
        });

        // Single writer for all output files.
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const std::string name = safe_file_name(jobs[i].id);
            if (codes[i]) {
                std::string code = *codes[i];
                if (!code.empty() && code.back() != '\n') code += '\n';
                util::write_file(dir / "rust" / (name + ".rs"), code);
            }
            util::write_file(dir / "audit" / (name + ".json"), audits[i].dump(2) + "\n");
            const auto& r = rows[i];
            log("[" + r.id + "] cap=" + std::to_string(cap) + " compiled=" + (r.compiled ? "yes" : "no") +
                " ca=" + (r.ca ? std::to_string(*r.ca) : "-") + " unsafe_lines=" + std::to_string(r.unsafe_lines) +
                (r.error.empty() ? "" : " error=" + r.error));
        }
        auto report = metrics::aggregate(rows);
        const auto manifest = run_manifest(ctx.config, ctx.toolchain, cap, jobs);
        util::write_file(dir / "run.json", manifest.dump(2) + "\n");
        util::write_file(dir / "report.json", report_file_text(report, manifest));
        util::write_file(dir / "report.txt", metrics::render_text(report));
        sweep.emplace_back(cap, report);
        reports.push_back(std::move(report));
    }
    if (caps.size() > 1) util::write_file(out_dir / "sweep.csv", metrics::sweep_csv(sweep));
    return reports;
}

namespace {

nlohmann::json read_json(const fs::path& path) {
    const std::string text = util::read_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedRecord(path.string() + ": " + e.what(), 1);
    }
}

struct StoredJob {
    std::string id;
    std::optional<std::string> code;
    std::vector<translator::TestCase> cases;
    int iterations_used = 0;
    std::string error;
};

}  // namespace

Rescored rescore(const fs::path& target, const std::optional<fs::path>& dataset, compiler::CompilerBackend& compiler,
                 const RunConfig& config) {
    Rescored out;
    out.manifest = nullptr;
    if (!fs::exists(target)) throw IoError("no such file or directory: " + target.string());
    if (!fs::is_directory(target)) {
        const auto j = read_json(target);
        out.report = metrics::report_from_json(j);
        if (j.contains("run")) out.manifest = j["run"];
        return out;
    }

    std::map<std::string, translator::TranslationJob> by_id;
    std::vector<StoredJob> stored;
    const bool is_run_dir = fs::exists(target / "run.json");
    std::optional<fs::path> dataset_path = dataset;
    if (is_run_dir) {
        out.manifest = read_json(target / "run.json");
        if (!dataset_path && out.manifest.value("dataset", std::string()) != "")
            dataset_path = out.manifest["dataset"].get<std::string>();
    }
    if (dataset_path)
        for (auto& job : translator::load_dataset(*dataset_path)) by_id.emplace(job.id, std::move(job));

    auto cases_for = [&](const std::string& id) {
        auto it = by_id.find(id);
        return it == by_id.end() ? std::vector<translator::TestCase>{} : it->second.test_cases;
    };

    if (is_run_dir) {
        for (const auto& idj : out.manifest.at("jobs")) {
            StoredJob s;
            s.id = idj.get<std::string>();
            const std::string name = safe_file_name(s.id);
            if (fs::exists(target / "rust" / (name + ".rs"))) s.code = util::read_file(target / "rust" / (name + ".rs"));
            if (fs::exists(target / "audit" / (name + ".json"))) {
                const auto a = read_json(target / "audit" / (name + ".json"));
                if (a.contains("refinement") && a["refinement"].is_object())
                    s.iterations_used = a["refinement"].value("iterations_used", 0);
                if (a.contains("result") && a["result"].is_object()) s.error = a["result"].value("error", "");
            }
            s.cases = cases_for(s.id);
            stored.push_back(std::move(s));
        }
    } else {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(target))
            if (entry.is_regular_file() && entry.path().extension() == ".rs") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            StoredJob s;
            s.id = f.stem().string();
            s.code = util::read_file(f);
            s.cases = cases_for(s.id);
            stored.push_back(std::move(s));
        }
    }
    if (stored.empty()) throw EmptyDataset();

    util::TempDir work("c2r-rescore-");
    const auto timeout = std::chrono::milliseconds(std::chrono::seconds(config.exec_timeout_s));
    std::vector<metrics::JobRow> rows(stored.size());
    util::parallel_for(stored.size(), worker_count(config.jobs), [&](std::size_t i) {
        const StoredJob& s = stored[i];
        bool compiled = false;
        std::optional<int> ca;
        if (!s.cases.empty()) ca = 0;
        std::string error = s.error;
        if (s.code) {
            const auto outcome = compiler.compile(*s.code, work.path() / safe_file_name(s.id));
            compiled = outcome.success;
            if (compiled && !s.cases.empty()) {
                try {
                    ca = metrics::evaluate_executable(*outcome.artifact_path, s.cases, timeout);
                } catch (const SpawnError& e) {
                    error = std::string("execution failed: ") + e.what();
                }
            }
        }
        rows[i] = metrics::make_row(s.id, compiled, ca, metrics::scan_unsafe(s.code.value_or("")), s.iterations_used,
                                    error);
    });
    out.report = metrics::aggregate(rows);
    return out;
}

}  // namespace c2r::cli
