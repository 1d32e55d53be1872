#pragma once

#include <stdexcept>
#include <string>

namespace govmine {

/// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable input, missing manifest, or other fatal ingest condition.
class IngestError : public Error {
public:
    using Error::Error;
};

/// Internal data-consistency violations (uncovered sentences, duplicate keys).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Invalid argument or precondition for a numerical routine.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Rank-deficient or singular regression design.
class SingularDesignError : public Error {
public:
    using Error::Error;
};

/// External classifier could not be reached.
class TransportError : public Error {
public:
    using Error::Error;
};

/// External classifier replied with a malformed or misaligned payload.
class ProtocolError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A pipeline stage failed; carries the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace govmine
