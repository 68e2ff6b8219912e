#include "c2r/translator/job.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "c2r/error.hpp"
#include "c2r/util/files.hpp"

namespace c2r::translator {

nlohmann::json to_json(const TranslationJob& job) {
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& tc : job.test_cases) cases.push_back({{"input", tc.input}, {"expected", tc.expected}});
    nlohmann::json j = {{"id", job.id}, {"c_code", job.c_code}, {"test_cases", cases}};
    if (job.reference_rust) j["reference_rust"] = *job.reference_rust;
    return j;
}

TranslationJob job_from_json(const nlohmann::json& j, std::size_t line) {
    if (!j.is_object()) throw MalformedRecord("expected a JSON object", line);
    auto str = [&](const nlohmann::json& obj, const char* key) -> std::string {
        auto it = obj.find(key);
        if (it == obj.end()) throw MalformedRecord(std::string("missing \"") + key + "\"", line);
        if (!it->is_string()) throw MalformedRecord(std::string("\"") + key + "\" must be a string", line);
        return it->get<std::string>();
    };
    TranslationJob job;
    job.id = str(j, "id");
    job.c_code = str(j, "c_code");
    if (auto it = j.find("test_cases"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw MalformedRecord("\"test_cases\" must be an array", line);
        for (const auto& tc : *it) {
            if (!tc.is_object()) throw MalformedRecord("test case must be an object", line);
            job.test_cases.push_back(TestCase{str(tc, "input"), str(tc, "expected")});
        }
    }
    if (auto it = j.find("reference_rust"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw MalformedRecord("\"reference_rust\" must be a string", line);
        job.reference_rust = it->get<std::string>();
    }
    return job;
}

std::vector<TranslationJob> load_dataset(const std::filesystem::path& path) {
    std::vector<TranslationJob> jobs;
    std::set<std::string> seen;
    for (const auto& line : util::read_jsonl_lines(path)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line.text);
        } catch (const nlohmann::json::parse_error& e) {
            throw MalformedRecord(std::string("invalid JSON: ") + e.what(), line.number);
        }
        auto job = job_from_json(j, line.number);
        if (!seen.insert(job.id).second)
            throw DuplicateId("duplicate job id " + job.id + " at line " + std::to_string(line.number));
        jobs.push_back(std::move(job));
    }
    return jobs;
}

void save_dataset(const std::filesystem::path& path, std::span<const TranslationJob> jobs) {
    std::string out;
    for (const auto& job : jobs) out += to_json(job).dump() + "\n";
    util::write_file(path, out);
}

}  // namespace c2r::translator
