#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace streamclique {

/// Base of every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnknownEventError : public Error {
public:
    explicit UnknownEventError(const std::string& name)
        : Error("unknown event '" + name + "'"), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class DuplicateRecordError : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// Both histograms of a pair are empty, so the normalizer 1/(|Y|+|Z|) does not exist.
class UndefinedSimilarity : public Error {
public:
    using Error::Error;
};

/// The current subgraph carries no positive weight (x'Ax = 0).
class DegenerateGraph : public Error {
public:
    using Error::Error;
};

class OracleLimit : public Error {
public:
    using Error::Error;
};

class EmptyClass : public Error {
public:
    using Error::Error;
};

class SpecError : public Error {
public:
    using Error::Error;
};

class VocabularyMismatch : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace streamclique
