#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace elicit {

// Transport-level classification shared by the library, CLI and HTTP API.
// Every exception type below maps to exactly one code.
enum class ErrorCode {
    bad_request,
    not_found,
    state_conflict,
    provider_unavailable,
    provider_format,
    internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Empty or otherwise unusable natural-language query.
class QueryError : public Error {
public:
    explicit QueryError(const std::string& message) : Error(ErrorCode::bad_request, message) {}
};

// Invalid configuration value or unknown configuration key.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error(ErrorCode::bad_request, message) {}
};

// A selection that does not refer to something the caller was offered.
class SelectionError : public Error {
public:
    explicit SelectionError(const std::string& message) : Error(ErrorCode::bad_request, message) {}
};

// Malformed input file (annotations, scripts, schemas). Carries the 1-based
// line number when the format is line oriented, 0 otherwise.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line = 0)
        : Error(ErrorCode::bad_request, line ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class NotFoundError : public Error {
public:
    explicit NotFoundError(const std::string& message) : Error(ErrorCode::not_found, message) {}
};

// Operation invoked in a dialogue phase that does not allow it.
class StateError : public Error {
public:
    explicit StateError(const std::string& message) : Error(ErrorCode::state_conflict, message) {}
};

// Retryable: the remote endpoint could not be reached or answered with a
// transport-level failure.
class ProviderUnavailableError : public Error {
public:
    explicit ProviderUnavailableError(const std::string& message)
        : Error(ErrorCode::provider_unavailable, message) {}
};

// The scripted LLM provider has no entry for a prompt.
class ScriptMissError : public ProviderUnavailableError {
public:
    explicit ScriptMissError(const std::string& message) : ProviderUnavailableError(message) {}
};

// Provider answered, but not in the agreed output format. The raw text is
// kept for logging and repair.
class ProviderFormatError : public Error {
public:
    ProviderFormatError(const std::string& message, std::string raw)
        : Error(ErrorCode::provider_format, message), raw_(std::move(raw)) {}

    const std::string& raw() const noexcept { return raw_; }

private:
    std::string raw_;
};

// Corpus source missing or unreadable; fatal for load.
class CorpusError : public Error {
public:
    explicit CorpusError(const std::string& message) : Error(ErrorCode::internal, message) {}
};

class PersistenceError : public Error {
public:
    explicit PersistenceError(const std::string& message) : Error(ErrorCode::internal, message) {}
};

// Caller broke a documented precondition (dimension mismatch, empty feature
// set for reranking, ...).
class ContractViolation : public Error {
public:
    explicit ContractViolation(const std::string& message) : Error(ErrorCode::internal, message) {}
};

}  // namespace elicit
