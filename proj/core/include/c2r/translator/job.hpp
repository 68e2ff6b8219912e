#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace c2r::translator {

struct TestCase {
    std::string input;     // stdin
    std::string expected;  // expected stdout

    friend bool operator==(const TestCase&, const TestCase&) = default;
};

struct TranslationJob {
    std::string id;
    std::string c_code;
    std::vector<TestCase> test_cases;  // may be empty: CA undefined for the job
    std::optional<std::string> reference_rust;

    friend bool operator==(const TranslationJob&, const TranslationJob&) = default;
};

nlohmann::json to_json(const TranslationJob& job);
TranslationJob job_from_json(const nlohmann::json& j, std::size_t line);

// JSONL. Throws IoError, MalformedRecord, DuplicateId.
std::vector<TranslationJob> load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, std::span<const TranslationJob> jobs);

}  // namespace c2r::translator
