#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace c2r {

// Base for every error raised by the library. Callers that only care about
// "something failed" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line) : Error(what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class MalformedRecord : public Error {
public:
    MalformedRecord(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateId : public Error {
public:
    using Error::Error;
};

class UnknownDoc : public Error {
public:
    using Error::Error;
};

class EmptyIndex : public Error {
public:
    EmptyIndex() : Error("corpus index is empty") {}
};

class NetworkError : public Error {
public:
    NetworkError(const std::string& what, int attempts) : Error(what), attempts_(attempts) {}
    int attempts() const noexcept { return attempts_; }

private:
    int attempts_;
};

class ApiError : public Error {
public:
    ApiError(int status, const std::string& body_excerpt, int attempts)
        : Error("API error " + std::to_string(status) + ": " + body_excerpt),
          status_(status), attempts_(attempts) {}
    int status() const noexcept { return status_; }
    int attempts() const noexcept { return attempts_; }

private:
    int status_;
    int attempts_;
};

class MockExhausted : public Error {
public:
    using Error::Error;
};

class ToolchainMissing : public Error {
public:
    using Error::Error;
};

class SpawnError : public Error {
public:
    explicit SpawnError(const std::string& what, int errno_value = 0) : Error(what), errno_(errno_value) {}
    int errno_value() const noexcept { return errno_; }

private:
    int errno_;
};

class EmptyDataset : public Error {
public:
    EmptyDataset() : Error("EmptyDataset: no samples to evaluate") {}
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace c2r
