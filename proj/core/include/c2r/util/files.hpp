#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace c2r::util {

// Throws IoError.
std::string read_file(const std::filesystem::path& path);
// Creates parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view contents);

// Non-empty lines of a JSONL file paired with their 1-based line numbers.
struct JsonlLine {
    std::size_t number = 0;
    std::string text;
};
std::vector<JsonlLine> read_jsonl_lines(const std::filesystem::path& path);

std::string trim(std::string_view s);

// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t stable_hash(std::string_view s);

}  // namespace c2r::util
