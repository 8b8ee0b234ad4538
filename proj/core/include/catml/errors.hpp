#pragma once

#include <stdexcept>
#include <string>

namespace catml {

// Base for every error raised by the library. Callers that only need a
// message can catch this; the subclasses exist so tests and the CLI can
// tell argument problems from data problems.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

// Malformed header, duplicate column names, empty input.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Ragged or otherwise unreadable CSV records.
class IngestError : public Error {
public:
    using Error::Error;
};

class ImputationError : public Error {
public:
    using Error::Error;
};

// Operation called on data in the wrong state (missing cells, no labels).
class StateError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class InitializationError : public Error {
public:
    using Error::Error;
};

class PruneError : public Error {
public:
    using Error::Error;
};

class SelectionError : public Error {
public:
    using Error::Error;
};

// Bad model/config file: unknown version, missing keys, wrong types.
class FormatError : public Error {
public:
    using Error::Error;
};

// Wraps an error raised inside the experiment pipeline with the stage
// that raised it ("load", "impute", "label", "select", "split", "fit",
// "predict", "evaluate").
class PipelineError : public Error {
public:
    PipelineError(std::string stage, const std::string& message)
        : Error(stage + ": " + message), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace catml
