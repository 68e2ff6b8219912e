#include "c2r/cli/commands.hpp"

#include <atomic>
#include <iterator>
#include <map>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "c2r/cli/config.hpp"
#include "c2r/cli/pipeline.hpp"
#include "c2r/error.hpp"
#include "c2r/util/files.hpp"
#include "c2r/util/process.hpp"

namespace c2r::cli {

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
    std::optional<std::string> config_path;
    std::map<std::string, std::string> overrides;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "key = value configuration file");
    auto bind = [&](const char* flag, const char* key, const char* help) {
        cmd->add_option_function<std::string>(
            flag, [&flags, key](const std::string& v) { flags.overrides[key] = v; }, help);
    };
    bind("--mode", "mode", "instruction | icl | rag | irene");
    bind("--iterations", "iterations", "maximum refinement rounds (0-5)");
    bind("--k", "k", "demonstrations retrieved per job");
    bind("--threshold", "threshold", "minimum BM25 score for a demonstration");
    bind("--seed", "seed", "RNG seed for ICL sampling");
    bind("--jobs", "jobs", "worker threads");
    bind("--mock-script", "mock_script", "JSON script for the mock model backend");
    bind("--out-dir", "out_dir", "output directory");
    bind("--corpus", "corpus", "demonstration corpus (JSONL)");
    bind("--dataset", "dataset", "translation dataset (JSONL)");
}

RunConfig load(const CommonFlags& flags) {
    RunConfig config =
        resolve_config(flags.config_path ? std::optional<fs::path>(*flags.config_path) : std::nullopt, flags.overrides);
    const int slots = config.max_processes > 0 ? config.max_processes
                                              : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    util::ProcessLimiter::configure(slots);
    return config;
}

std::string read_c_input(const std::string& path, std::istream& in) {
    if (path == "-") return std::string(std::istreambuf_iterator<char>(in), {});
    return util::read_file(path);
}

std::vector<corpus::RawItem> read_items(const fs::path& path, bool need_id) {
    std::vector<corpus::RawItem> items;
    for (const auto& line : util::read_jsonl_lines(path)) {
        const auto j = nlohmann::json::parse(line.text, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw MalformedRecord(path.string() + ": invalid JSON", line.number);
        if (!j.contains("c_code") || !j["c_code"].is_string())
            throw MalformedRecord(path.string() + ": missing \"c_code\"", line.number);
        corpus::RawItem item;
        item.c_code = j["c_code"].get<std::string>();
        if (j.contains("id") && j["id"].is_string()) item.id = j["id"].get<std::string>();
        else if (need_id) throw MalformedRecord(path.string() + ": missing \"id\"", line.number);
        items.push_back(std::move(item));
    }
    return items;
}

std::optional<corpus::CorpusIndex> load_index(const RunConfig& config) {
    if (config.corpus.empty()) return std::nullopt;
    return corpus::CorpusIndex::build(corpus::load_corpus(config.corpus));
}

int cmd_analyze(const std::string& path, std::istream& in, std::ostream& out) {
    const std::string source = read_c_input(path, in);
    out << rules::hints_to_json_text(rules::analyze_source(source)) << '\n';
    return kExitOk;
}

int cmd_build_corpus(const std::string& raw_path, const std::string& eval_path, const RunConfig& config,
                     std::ostream& out, std::ostream& err) {
    const auto raw = read_items(raw_path, true);
    std::vector<std::string> eval;
    for (auto& item : read_items(eval_path, false)) eval.push_back(std::move(item.c_code));

    compiler::RustCompiler rustc(rustc_settings(config));
    rustc.assert_version(config.rustc_version);
    llm::Gateway gateway(make_backend(config), config.model);
    util::TempDir work("c2r-corpus-");
    std::atomic<std::size_t> counter{0};

    auto translate = [&](const std::string& c_code) {
        const auto prompt = translator::compose_prompt(translator::PromptMode::Instruction, c_code, {}, {}, {});
        llm::GenerationRequest request;
        request.system_text = prompt.system_text;
        request.user_text = prompt.user_text;
        request.max_tokens = config.max_tokens;
        request.temperature = config.temperature;
        request.top_p = config.top_p;
        return llm::extract_code_block(gateway.generate(request).text);
    };
    auto compile_check = [&](const std::string& rust) {
        return rustc.compile(rust, work.path() / ("item_" + std::to_string(counter++))).success;
    };

    const std::size_t workers =
        config.jobs > 0 ? static_cast<std::size_t>(config.jobs) : std::max(1u, std::thread::hardware_concurrency());
    const auto result = corpus::build_corpus(raw, eval, translate, compile_check, workers);

    const fs::path dir = config.out_dir;
    corpus::save_corpus(dir / "corpus.jsonl", result.examples);
    std::string log;
    std::map<std::string, std::size_t> counts;
    for (const auto& entry : result.log) {
        log += nlohmann::json{{"id", entry.id}, {"outcome", corpus::outcome_name(entry.outcome)}, {"detail", entry.detail}}
                   .dump() +
               "\n";
        ++counts[std::string(corpus::outcome_name(entry.outcome))];
        if (entry.outcome != corpus::BuildOutcome::Kept)
            err << "[" << entry.id << "] " << corpus::outcome_name(entry.outcome) << ": " << entry.detail << '\n';
    }
    util::write_file(dir / "build_log.jsonl", log);
    out << "kept " << result.examples.size() << " of " << raw.size();
    for (const auto& [name, n] : counts)
        if (name != "kept") out << ", " << name << " " << n;
    out << "\ncorpus: " << (dir / "corpus.jsonl").string() << "\n";
    return kExitOk;
}

int cmd_retrieve(const std::string& c_path, bool any_category, const RunConfig& config, std::istream& in,
                 std::ostream& out, std::ostream& err) {
    if (config.corpus.empty()) throw ConfigError("retrieve needs --corpus");
    const std::string c_code = read_c_input(c_path, in);
    const auto index = corpus::CorpusIndex::build(corpus::load_corpus(config.corpus));
    rules::CategorySet required;
    if (!any_category) {
        try {
            required = rules::categories_of(rules::analyze_source(c_code));
        } catch (const ParseError& e) {
            err << "warning: rule analysis failed, retrieving without a category filter: " << e.what() << '\n';
        }
    }
    nlohmann::json hits = nlohmann::json::array();
    for (const auto& hit : corpus::retrieve(index, c_code, required, static_cast<std::size_t>(config.k),
                                            config.threshold)) {
        nlohmann::json cats = nlohmann::json::array();
        for (auto c : hit.example.categories) cats.push_back(std::string(rules::category_name(c)));
        hits.push_back({{"id", hit.example.id}, {"score", hit.score}, {"categories", cats}});
    }
    out << hits.dump(2) << '\n';
    return kExitOk;
}

int cmd_translate(const std::string& dataset_arg, std::optional<int> sweep, const RunConfig& config_in,
                  std::ostream& out, std::ostream& err) {
    RunConfig config = config_in;
    if (!dataset_arg.empty()) config.dataset = dataset_arg;
    if (config.dataset.empty()) throw ConfigError("translate needs a dataset");
    const auto jobs = translator::load_dataset(config.dataset);
    if (jobs.empty()) throw EmptyDataset();
    translator::parse_mode(config.mode);

    compiler::RustCompiler rustc(rustc_settings(config));
    const std::string toolchain = rustc.assert_version(config.rustc_version);
    llm::Gateway gateway(make_backend(config), config.model);
    const auto index = load_index(config);

    std::vector<int> caps;
    if (sweep) {
        if (*sweep < 0 || *sweep > 5) throw ConfigError("--sweep must be between 0 and 5");
        for (int c = 0; c <= *sweep; ++c) caps.push_back(c);
    } else {
        caps.push_back(config.iterations);
    }
    RunContext ctx{config, gateway, rustc, index ? &*index : nullptr, toolchain, &err};
    const auto reports = run_translation(ctx, jobs, caps, config.out_dir);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (caps.size() > 1) out << "== iterations " << caps[i] << "\n";
        out << metrics::render_text(reports[i]);
    }
    return kExitOk;
}

int cmd_metrics(const std::string& target, const std::optional<std::string>& dataset, bool write,
                const RunConfig& config, std::ostream& out) {
    compiler::RustCompiler rustc(rustc_settings(config));
    const auto rescored =
        rescore(target, dataset ? std::optional<fs::path>(*dataset) : std::nullopt, rustc, config);
    if (write) {
        const fs::path dir = config.out_dir;
        util::write_file(dir / "report.json", report_file_text(rescored.report, rescored.manifest));
        util::write_file(dir / "report.txt", metrics::render_text(rescored.report));
    }
    out << metrics::render_text(rescored.report);
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rule-augmented C to Rust translation and evaluation", "c2r"};
    app.require_subcommand(1);

    std::string analyze_path = "-";
    auto* analyze = app.add_subcommand("analyze", "print rule hints for a C file as JSON");
    analyze->add_option("file", analyze_path, "C source ('-' for stdin)");

    CommonFlags corpus_flags;
    std::string raw_path, eval_path;
    auto* build = app.add_subcommand("build-corpus", "build a demonstration corpus from raw C programs");
    build->add_option("raw", raw_path, "JSONL of {id, c_code}")->required();
    build->add_option("eval", eval_path, "JSONL evaluation set (c_code per line)")->required();
    add_common(build, corpus_flags);

    CommonFlags retrieve_flags;
    std::string retrieve_path;
    bool any_category = false;
    auto* retrieve = app.add_subcommand("retrieve", "show demonstrations retrieved for a C file");
    retrieve->add_option("file", retrieve_path, "C source ('-' for stdin)")->required();
    retrieve->add_flag("--any-category", any_category, "skip the rule-category filter");
    add_common(retrieve, retrieve_flags);

    CommonFlags translate_flags;
    std::string dataset_arg;
    std::optional<int> sweep;
    auto* translate = app.add_subcommand("translate", "translate a dataset and report metrics");
    translate->add_option("jobs-file", dataset_arg, "JSONL translation jobs (overrides --dataset)");
    translate->add_option("--sweep", sweep, "evaluate every iteration cap from 0 to N");
    add_common(translate, translate_flags);

    CommonFlags metrics_flags;
    std::string metrics_target;
    bool write_report = false;
    auto* metrics_cmd = app.add_subcommand("metrics", "re-score stored translations offline");
    metrics_cmd->add_option("target", metrics_target, "output directory, directory of .rs files, or report.json")
        ->required();
    metrics_cmd->add_flag("--write", write_report, "write report.json and report.txt into --out-dir");
    add_common(metrics_cmd, metrics_flags);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*analyze) return cmd_analyze(analyze_path, in, out);
        if (*build) return cmd_build_corpus(raw_path, eval_path, load(corpus_flags), out, err);
        if (*retrieve) return cmd_retrieve(retrieve_path, any_category, load(retrieve_flags), in, out, err);
        if (*translate) return cmd_translate(dataset_arg, sweep, load(translate_flags), out, err);
        if (*metrics_cmd) {
            const auto config = load(metrics_flags);
            std::optional<std::string> dataset;
            if (!config.dataset.empty()) dataset = config.dataset;
            return cmd_metrics(metrics_target, dataset, write_report, config, out);
        }
    } catch (const ParseError& e) {
        err << "error: parse error at line " << e.line() << ": " << e.what() << '\n';
        return kExitParse;
    } catch (const ToolchainMissing& e) {
        err << "error: " << e.what() << '\n';
        return kExitToolchain;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitIo;
}

}  // namespace c2r::cli
