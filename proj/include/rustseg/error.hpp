#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rustseg {

enum class ErrorCode {
    InvalidArgument,
    Io,
    UnsupportedFormat,
    Dimension,
    Config,
    Degenerate,
    Batch,
    NotFound,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct FieldIssue {
    std::string field;
    std::string message;
};

// Thrown by config parsing/validation; carries one entry per offending field.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<FieldIssue> issues)
        : Error(ErrorCode::Config, summarize(issues)), issues_(std::move(issues)) {}
    ConfigError(std::string field, std::string message)
        : ConfigError(std::vector<FieldIssue>{FieldIssue{std::move(field), std::move(message)}}) {}

    const std::vector<FieldIssue>& issues() const noexcept { return issues_; }

private:
    static std::string summarize(const std::vector<FieldIssue>& issues) {
        std::string s = "invalid config";
        for (const auto& i : issues) s += "; " + i.field + ": " + i.message;
        return s;
    }

    std::vector<FieldIssue> issues_;
};

}  // namespace rustseg
