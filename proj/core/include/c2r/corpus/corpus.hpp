#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "c2r/rules/rule_analyzer.hpp"

namespace c2r::corpus {

// Splits on every non-alphanumeric character and lowercases. Deterministic.
std::vector<std::string> tokenize(std::string_view code);

// An aligned C/Rust pair used as a few-shot demonstration.
struct DemoExample {
    std::string id;
    std::string c_code;
    std::string rust_code;
    rules::CategorySet categories;
    std::size_t token_count = 0;

    friend bool operator==(const DemoExample&, const DemoExample&) = default;
};

// Fills categories and token_count from c_code. Throws ParseError.
DemoExample annotate(std::string id, std::string c_code, std::string rust_code);

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Posting {
    std::size_t doc = 0;  // position in documents()
    std::size_t tf = 0;
};

// Immutable inverted index over the C side of the corpus.
class CorpusIndex {
public:
    CorpusIndex() = default;

    // Throws DuplicateId.
    static CorpusIndex build(std::vector<DemoExample> examples, Bm25Params params = {});

    const std::vector<DemoExample>& documents() const { return docs_; }
    std::size_t size() const { return docs_.size(); }
    bool empty() const { return docs_.empty(); }
    const Bm25Params& params() const { return params_; }

    const std::unordered_map<std::string, std::vector<Posting>>& postings() const { return postings_; }
    std::size_t document_frequency(const std::string& term) const;
    std::size_t document_length(std::size_t doc) const { return lengths_.at(doc); }
    double average_length() const { return avg_length_; }

    std::optional<std::size_t> find(std::string_view id) const;

    double idf(const std::string& term) const;

    // BM25 of one document. Query terms are summed with multiplicity.
    // Throws UnknownDoc.
    double score(std::span<const std::string> query, std::string_view doc_id) const;

    // Scores for every document, computed through the postings lists.
    std::vector<double> score_all(std::span<const std::string> query) const;

private:
    std::vector<DemoExample> docs_;
    std::vector<std::size_t> lengths_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::unordered_map<std::string, std::size_t> id_to_doc_;
    double avg_length_ = 0.0;
    Bm25Params params_;
};

struct RetrievalHit {
    DemoExample example;
    double score = 0.0;
};

struct CandidateSet {
    std::vector<std::size_t> docs;  // ascending document positions
    bool used_fallback = false;     // no superset match; any-overlap used instead
};

// Examples whose categories contain `required`; falls back to any overlap
// when none do. An empty `required` admits every example.
CandidateSet select_candidates(const CorpusIndex& index, const rules::CategorySet& required);

// Top-k candidates by BM25 on tokenize(c_code) with score >= threshold,
// sorted by score descending then id ascending. Throws EmptyIndex.
std::vector<RetrievalHit> retrieve(const CorpusIndex& index, std::string_view c_code,
                                   const rules::CategorySet& required, std::size_t k, double threshold);

// ---- corpus construction ---------------------------------------------------

struct RawItem {
    std::string id;
    std::string c_code;
};

enum class BuildOutcome { Kept, Leaked, NonCompiling, TranslateFailed, AnalysisFailed };

std::string_view outcome_name(BuildOutcome outcome);

struct BuildLogEntry {
    std::string id;
    BuildOutcome outcome = BuildOutcome::Kept;
    std::string detail;
};

struct BuildResult {
    std::vector<DemoExample> examples;
    std::vector<BuildLogEntry> log;  // one entry per raw item, input order
};

using TranslateFn = std::function<std::string(const std::string& c_code)>;
using CompileCheckFn = std::function<bool(const std::string& rust_code)>;

// C token texts with comments, whitespace and directives removed.
std::vector<std::string> normalized_c_tokens(std::string_view c_code);

// Leakage filter, then translate + compile filter, then annotation.
// Per-item failures are logged as skips; only ToolchainMissing aborts the batch.
BuildResult build_corpus(std::span<const RawItem> raw, std::span<const std::string> eval_set,
                         const TranslateFn& translate, const CompileCheckFn& compile_check,
                         std::size_t parallelism = 1);

// ---- persistence -------------------------------------------------------------

nlohmann::json to_json(const DemoExample& example);
DemoExample example_from_json(const nlohmann::json& j, std::size_t line);

// JSONL, one example per line. Throws IoError.
void save_corpus(const std::filesystem::path& path, std::span<const DemoExample> examples);
// Throws IoError, MalformedRecord.
std::vector<DemoExample> load_corpus(const std::filesystem::path& path);

}  // namespace c2r::corpus
