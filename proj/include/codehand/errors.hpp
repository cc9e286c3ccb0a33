#pragma once

#include <stdexcept>
#include <string>

namespace codehand {

// Malformed input document or file. CLI exit code 2.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid option or configuration value. CLI exit code 3.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Asked for more corpus samples than are available. CLI exit code 3.
class InsufficientCorpusError : public ConfigError {
public:
    explicit InsufficientCorpusError(const std::string& what) : ConfigError(what) {}
};

// Empty input where at least one element is required. CLI exit code 4.
class EmptyInputError : public std::runtime_error {
public:
    explicit EmptyInputError(const std::string& what) : std::runtime_error(what) {}
};

// Error rate against an empty reference. CLI exit code 4.
class UndefinedRateError : public std::runtime_error {
public:
    explicit UndefinedRateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace codehand
