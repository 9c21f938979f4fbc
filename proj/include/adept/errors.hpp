#pragma once

#include <stdexcept>
#include <string>

namespace adept {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// ---- input ingestion ----

class FileMissing : public Error {
public:
    explicit FileMissing(const std::string& path)
        : Error("file not found: " + path), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& detail)
        : Error("i/o error on " + path + ": " + detail), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Malformed document. Carries the source path and, when known, a 1-based line.
class ParseError : public Error {
public:
    ParseError(const std::string& path, int line, const std::string& detail)
        : Error(path + (line > 0 ? ":" + std::to_string(line) : "") + ": " + detail),
          path_(path),
          line_(line) {}
    const std::string& path() const { return path_; }
    int line() const { return line_; }

private:
    std::string path_;
    int line_ = 0;
};

/// A document parsed but violates the schema. Names the offending file and field.
class ValidationError : public Error {
public:
    ValidationError(const std::string& path, const std::string& field, const std::string& detail)
        : Error(path + ": field '" + field + "': " + detail), path_(path), field_(field) {}
    const std::string& path() const { return path_; }
    const std::string& field() const { return field_; }

private:
    std::string path_;
    std::string field_;
};

class EmptyPanel : public Error {
public:
    explicit EmptyPanel(const std::string& dir)
        : Error("no persona files in directory: " + dir) {}
};

// ---- scripted backend ----

class MissingKey : public Error {
public:
    explicit MissingKey(const std::string& key)
        : Error("script has no responses for key: " + key) {}
};

// ---- debate engine ----

class IncompletePhase : public Error {
public:
    explicit IncompletePhase(const std::string& detail)
        : Error("incomplete phase: " + detail) {}
};

class IncompleteTrace : public Error {
public:
    explicit IncompleteTrace(const std::string& detail)
        : Error("incomplete trace: " + detail) {}
};

// ---- persistence ----

class HashMismatch : public Error {
public:
    HashMismatch(const std::string& expected, const std::string& actual)
        : Error("canonical hash mismatch: file says " + expected + ", body hashes to " + actual) {}
};

class UnsupportedVersion : public Error {
public:
    explicit UnsupportedVersion(const std::string& version)
        : Error("unsupported format version: " + version) {}
};

// ---- analysis ----

class ScenarioMismatch : public Error {
public:
    explicit ScenarioMismatch(const std::string& detail)
        : Error("traces reference different scenarios: " + detail) {}
};

} // namespace adept
