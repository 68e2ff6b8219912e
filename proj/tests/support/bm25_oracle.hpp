#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "c2r/corpus/corpus.hpp"

namespace c2r::test {

// Brute-force BM25 straight from the definition: no postings, every count
// recomputed by scanning.
struct OracleDoc {
    std::string id;
    std::vector<std::string> terms;  // already lowercased
};

inline double oracle_bm25(const std::vector<OracleDoc>& docs, const std::vector<std::string>& query, std::size_t d,
                          double k1 = 1.2, double b = 0.75) {
    const double n = static_cast<double>(docs.size());
    double total_len = 0;
    for (const auto& doc : docs) total_len += static_cast<double>(doc.terms.size());
    const double avgdl = docs.empty() ? 0.0 : total_len / n;
    const double dl = static_cast<double>(docs[d].terms.size());

    double score = 0;
    for (const auto& q : query) {
        double df = 0;
        for (const auto& doc : docs)
            if (std::find(doc.terms.begin(), doc.terms.end(), q) != doc.terms.end()) df += 1;
        double tf = 0;
        for (const auto& t : docs[d].terms) tf += (t == q);
        if (tf == 0) continue;
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        const double len_norm = avgdl == 0.0 ? 0.0 : dl / avgdl;
        score += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len_norm));
    }
    return score;
}

struct OracleHit {
    std::string id;
    double score;
};

// Every document, best first; ties by id.
inline std::vector<OracleHit> oracle_ranking(const std::vector<OracleDoc>& docs, const std::vector<std::string>& query) {
    std::vector<OracleHit> hits;
    for (std::size_t d = 0; d < docs.size(); ++d) hits.push_back({docs[d].id, oracle_bm25(docs, query, d)});
    std::stable_sort(hits.begin(), hits.end(), [](const OracleHit& a, const OracleHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    return hits;
}

// Random corpus in C-ish surface syntax plus its ground-truth term lists.
struct RandomCorpus {
    std::vector<OracleDoc> oracle;
    std::vector<corpus::DemoExample> examples;
};

inline const std::vector<std::string>& oracle_vocabulary() {
    static const std::vector<std::string> v = {
        "int", "main", "return", "for", "while", "if", "else", "scanf", "printf", "malloc", "free", "dp",
        "sum", "i", "j", "n", "arr", "node", "next", "char", "long", "x1", "y2", "0", "100", "buf", "len",
        "struct", "sizeof", "void"};
    return v;
}

inline std::string random_case(std::string t, std::mt19937_64& rng) {
    for (auto& c : t)
        if (rng() % 4 == 0) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return t;
}

inline std::string join_noisy(const std::vector<std::string>& terms, std::mt19937_64& rng) {
    static const char* seps[] = {" ", "  ", "(", ");", " = ", "\n", "[", "] ", "->", ", ", "*", "{\n"};
    std::string out;
    for (const auto& t : terms) {
        out += seps[rng() % std::size(seps)];
        out += random_case(t, rng);
    }
    if (rng() % 2) out += ";\n";
    return out;
}

inline RandomCorpus random_corpus(std::mt19937_64& rng, std::size_t max_docs = 100, std::size_t max_terms = 40) {
    const auto& vocab = oracle_vocabulary();
    // A narrow vocabulary per corpus makes ties and shared terms common.
    const std::size_t width = 3 + rng() % (vocab.size() - 2);
    RandomCorpus rc;
    const std::size_t n_docs = 1 + rng() % max_docs;
    std::vector<std::size_t> order(n_docs);
    for (std::size_t i = 0; i < n_docs; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t d = 0; d < n_docs; ++d) {
        OracleDoc doc;
        char id[16];
        std::snprintf(id, sizeof id, "doc%03zu", order[d]);
        doc.id = id;
        const std::size_t len = rng() % (max_terms + 1);
        for (std::size_t t = 0; t < len; ++t) doc.terms.push_back(vocab[rng() % width]);
        corpus::DemoExample ex;
        ex.id = doc.id;
        ex.c_code = join_noisy(doc.terms, rng);
        ex.rust_code = "fn main() {}";
        for (auto c : rules::kAllCategories)
            if (rng() % 3 == 0) ex.categories.insert(c);
        ex.token_count = doc.terms.size();
        rc.examples.push_back(std::move(ex));
        rc.oracle.push_back(std::move(doc));
    }
    return rc;
}

// Query terms drawn mostly from the vocabulary, sometimes repeated, sometimes unseen.
inline std::vector<std::string> random_query(std::mt19937_64& rng) {
    const auto& vocab = oracle_vocabulary();
    std::vector<std::string> q;
    const std::size_t len = 1 + rng() % 8;
    for (std::size_t i = 0; i < len; ++i) {
        if (rng() % 7 == 0) q.push_back("zz" + std::to_string(rng() % 5));
        else q.push_back(vocab[rng() % vocab.size()]);
    }
    return q;
}

}  // namespace c2r::test
