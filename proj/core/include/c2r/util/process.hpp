#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

namespace c2r::util {

struct ProcessSpec {
    std::vector<std::string> argv;  // argv[0] is resolved through PATH
    std::filesystem::path cwd;      // empty: inherit
    std::string stdin_text;
    std::chrono::milliseconds timeout{10'000};
};

struct ProcessResult {
    int exit_code = -1;  // -1 when killed by a signal
    int term_signal = 0;
    bool timed_out = false;
    std::string stdout_text;
    std::string stderr_text;
    std::chrono::milliseconds duration{0};
};

// Runs a child in its own process group; on timeout the whole group is
// killed. Throws SpawnError (ENOENT is reported with errno_value() == ENOENT).
ProcessResult run_process(const ProcessSpec& spec);

// Bounds simultaneous child processes across the compiler and the runner.
class ProcessLimiter {
public:
    explicit ProcessLimiter(std::ptrdiff_t slots);
    void acquire() { sem_.acquire(); }
    void release() { sem_.release(); }

    // Replaces the process-wide limiter. Not thread-safe; call at startup.
    static void configure(std::ptrdiff_t slots);
    static ProcessLimiter& global();

private:
    std::counting_semaphore<1024> sem_;
};

class ProcessSlot {
public:
    explicit ProcessSlot(ProcessLimiter& limiter) : limiter_(limiter) { limiter_.acquire(); }
    ~ProcessSlot() { limiter_.release(); }
    ProcessSlot(const ProcessSlot&) = delete;
    ProcessSlot& operator=(const ProcessSlot&) = delete;

private:
    ProcessLimiter& limiter_;
};

// A fresh directory under the system temp dir; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& prefix);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace c2r::util
