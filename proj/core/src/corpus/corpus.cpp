#include "c2r/corpus/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "c2r/error.hpp"
#include "c2r/rules/c_lexer.hpp"
#include "c2r/util/files.hpp"
#include "c2r/util/parallel.hpp"

namespace c2r::corpus {

std::vector<std::string> tokenize(std::string_view code) {
    std::vector<std::string> terms;
    std::string current;
    for (unsigned char c : code) {
        if (std::isalnum(c)) {
            current += static_cast<char>(std::tolower(c));
        } else if (!current.empty()) {
            terms.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) terms.push_back(std::move(current));
    return terms;
}

DemoExample annotate(std::string id, std::string c_code, std::string rust_code) {
    DemoExample ex;
    ex.categories = rules::categories_of(rules::analyze_source(c_code));
    ex.token_count = tokenize(c_code).size();
    ex.id = std::move(id);
    ex.c_code = std::move(c_code);
    ex.rust_code = std::move(rust_code);
    return ex;
}

// ---- index -------------------------------------------------------------------

CorpusIndex CorpusIndex::build(std::vector<DemoExample> examples, Bm25Params params) {
    CorpusIndex index;
    index.params_ = params;
    index.docs_ = std::move(examples);
    index.lengths_.reserve(index.docs_.size());

    std::size_t total = 0;
    for (std::size_t d = 0; d < index.docs_.size(); ++d) {
        const DemoExample& doc = index.docs_[d];
        if (!index.id_to_doc_.emplace(doc.id, d).second) throw DuplicateId("duplicate corpus id: " + doc.id);

        std::map<std::string, std::size_t> tf;
        const auto terms = tokenize(doc.c_code);
        for (const auto& t : terms) ++tf[t];
        for (auto& [term, count] : tf) index.postings_[term].push_back(Posting{d, count});
        index.lengths_.push_back(terms.size());
        total += terms.size();
    }
    index.avg_length_ =
        index.docs_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(index.docs_.size());
    return index;
}

std::size_t CorpusIndex::document_frequency(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? 0 : it->second.size();
}

std::optional<std::size_t> CorpusIndex::find(std::string_view id) const {
    auto it = id_to_doc_.find(std::string(id));
    if (it == id_to_doc_.end()) return std::nullopt;
    return it->second;
}

double CorpusIndex::idf(const std::string& term) const {
    const double n = static_cast<double>(docs_.size());
    const double df = static_cast<double>(document_frequency(term));
    return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

namespace {

double term_weight(double idf, double tf, double doc_len, double avg_len, const Bm25Params& p) {
    const double norm = avg_len > 0.0 ? doc_len / avg_len : 0.0;
    return idf * (tf * (p.k1 + 1.0)) / (tf + p.k1 * (1.0 - p.b + p.b * norm));
}

}  // namespace

double CorpusIndex::score(std::span<const std::string> query, std::string_view doc_id) const {
    const auto doc = find(doc_id);
    if (!doc) throw UnknownDoc("unknown corpus document: " + std::string(doc_id));
    double s = 0.0;
    for (const auto& term : query) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        auto p = std::lower_bound(it->second.begin(), it->second.end(), *doc,
                                  [](const Posting& a, std::size_t d) { return a.doc < d; });
        if (p == it->second.end() || p->doc != *doc) continue;
        s += term_weight(idf(term), static_cast<double>(p->tf), static_cast<double>(lengths_[*doc]), avg_length_,
                         params_);
    }
    return s;
}

std::vector<double> CorpusIndex::score_all(std::span<const std::string> query) const {
    std::vector<double> scores(docs_.size(), 0.0);
    for (const auto& term : query) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const double w_idf = idf(term);
        for (const Posting& p : it->second)
            scores[p.doc] += term_weight(w_idf, static_cast<double>(p.tf), static_cast<double>(lengths_[p.doc]),
                                         avg_length_, params_);
    }
    return scores;
}

// ---- retrieval ---------------------------------------------------------------

CandidateSet select_candidates(const CorpusIndex& index, const rules::CategorySet& required) {
    CandidateSet out;
    const auto& docs = index.documents();
    for (std::size_t d = 0; d < docs.size(); ++d) {
        if (std::includes(docs[d].categories.begin(), docs[d].categories.end(), required.begin(), required.end()))
            out.docs.push_back(d);
    }
    if (!out.docs.empty() || required.empty()) return out;

    out.used_fallback = true;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const auto& cats = docs[d].categories;
        if (std::any_of(required.begin(), required.end(), [&](auto c) { return cats.count(c) > 0; }))
            out.docs.push_back(d);
    }
    return out;
}

std::vector<RetrievalHit> retrieve(const CorpusIndex& index, std::string_view c_code,
                                   const rules::CategorySet& required, std::size_t k, double threshold) {
    if (index.empty()) throw EmptyIndex();
    const auto query = tokenize(c_code);
    const auto scores = index.score_all(query);
    const auto candidates = select_candidates(index, required);

    std::vector<std::size_t> ranked;
    for (std::size_t d : candidates.docs)
        if (scores[d] >= threshold) ranked.push_back(d);
    const auto& docs = index.documents();
    std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return docs[a].id < docs[b].id;
    });
    if (ranked.size() > k) ranked.resize(k);

    std::vector<RetrievalHit> hits;
    hits.reserve(ranked.size());
    for (std::size_t d : ranked) hits.push_back(RetrievalHit{docs[d], scores[d]});
    return hits;
}

// ---- construction --------------------------------------------------------------

std::string_view outcome_name(BuildOutcome outcome) {
    switch (outcome) {
        case BuildOutcome::Kept: return "kept";
        case BuildOutcome::Leaked: return "leaked";
        case BuildOutcome::NonCompiling: return "non-compiling";
        case BuildOutcome::TranslateFailed: return "translate-failed";
        case BuildOutcome::AnalysisFailed: return "analysis-failed";
    }
    return "?";
}

std::vector<std::string> normalized_c_tokens(std::string_view c_code) {
    std::vector<std::string> out;
    for (auto& t : rules::lex_c(c_code))
        if (t.kind != rules::TokenKind::End) out.push_back(std::move(t.text));
    return out;
}

BuildResult build_corpus(std::span<const RawItem> raw, std::span<const std::string> eval_set,
                         const TranslateFn& translate, const CompileCheckFn& compile_check,
                         std::size_t parallelism) {
    std::set<std::vector<std::string>> eval_keys;
    for (const auto& code : eval_set) eval_keys.insert(normalized_c_tokens(code));

    struct Slot {
        BuildLogEntry log;
        std::optional<DemoExample> example;
    };
    std::vector<Slot> slots(raw.size());

    util::parallel_for(raw.size(), parallelism, [&](std::size_t i) {
        const RawItem& item = raw[i];
        Slot& slot = slots[i];
        slot.log.id = item.id;
        if (eval_keys.count(normalized_c_tokens(item.c_code))) {
            slot.log.outcome = BuildOutcome::Leaked;
            slot.log.detail = "duplicates an evaluation item";
            return;
        }
        std::string rust;
        try {
            rust = translate(item.c_code);
        } catch (const std::exception& e) {
            slot.log.outcome = BuildOutcome::TranslateFailed;
            slot.log.detail = e.what();
            return;
        }
        bool compiled = false;
        try {
            compiled = compile_check(rust);
        } catch (const ToolchainMissing&) {
            throw;
        } catch (const std::exception& e) {
            slot.log.outcome = BuildOutcome::NonCompiling;
            slot.log.detail = e.what();
            return;
        }
        if (!compiled) {
            slot.log.outcome = BuildOutcome::NonCompiling;
            slot.log.detail = "translation failed to compile";
            return;
        }
        try {
            slot.example = annotate(item.id, item.c_code, std::move(rust));
            slot.log.outcome = BuildOutcome::Kept;
        } catch (const std::exception& e) {
            slot.log.outcome = BuildOutcome::AnalysisFailed;
            slot.log.detail = e.what();
        }
    });

    BuildResult result;
    for (auto& slot : slots) {
        if (slot.example) result.examples.push_back(std::move(*slot.example));
        result.log.push_back(std::move(slot.log));
    }
    return result;
}

// ---- persistence -----------------------------------------------------------------

nlohmann::json to_json(const DemoExample& ex) {
    nlohmann::json cats = nlohmann::json::array();
    for (auto c : ex.categories) cats.push_back(std::string(rules::category_name(c)));
    return nlohmann::json{{"id", ex.id},
                          {"c_code", ex.c_code},
                          {"rust_code", ex.rust_code},
                          {"categories", cats},
                          {"token_count", ex.token_count}};
}

DemoExample example_from_json(const nlohmann::json& j, std::size_t line) {
    if (!j.is_object()) throw MalformedRecord("expected a JSON object", line);
    auto require_string = [&](const char* key) -> std::string {
        auto it = j.find(key);
        if (it == j.end()) throw MalformedRecord(std::string("missing \"") + key + "\"", line);
        if (!it->is_string()) throw MalformedRecord(std::string("\"") + key + "\" must be a string", line);
        return it->get<std::string>();
    };
    DemoExample ex;
    ex.id = require_string("id");
    ex.c_code = require_string("c_code");
    ex.rust_code = require_string("rust_code");

    auto cats = j.find("categories");
    if (cats == j.end() || !cats->is_array()) throw MalformedRecord("missing \"categories\" array", line);
    for (const auto& c : *cats) {
        if (!c.is_string()) throw MalformedRecord("category must be a string", line);
        auto parsed = rules::parse_category(c.get<std::string>());
        if (!parsed) throw MalformedRecord("unknown category " + c.get<std::string>(), line);
        ex.categories.insert(*parsed);
    }
    auto tc = j.find("token_count");
    if (tc == j.end()) {
        ex.token_count = tokenize(ex.c_code).size();
    } else if (!tc->is_number_unsigned() && !(tc->is_number_integer() && tc->get<long long>() >= 0)) {
        throw MalformedRecord("\"token_count\" must be a non-negative integer", line);
    } else {
        ex.token_count = tc->get<std::size_t>();
    }
    return ex;
}

void save_corpus(const std::filesystem::path& path, std::span<const DemoExample> examples) {
    std::string out;
    for (const auto& ex : examples) out += to_json(ex).dump() + "\n";
    util::write_file(path, out);
}

std::vector<DemoExample> load_corpus(const std::filesystem::path& path) {
    std::vector<DemoExample> out;
    for (const auto& line : util::read_jsonl_lines(path)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line.text);
        } catch (const nlohmann::json::parse_error& e) {
            throw MalformedRecord(std::string("invalid JSON: ") + e.what(), line.number);
        }
        out.push_back(example_from_json(j, line.number));
    }
    return out;
}

}  // namespace c2r::corpus
