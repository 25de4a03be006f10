#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace deepscore {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// A value fell outside its documented domain (severity level, rate, ...).
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// A metric was requested over an empty population; the rate is undefined.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

/// Every relevant entity is missing, so precision has no denominator.
class NoCapturedEntitiesError : public Error {
public:
    using Error::Error;
};

/// No clearly audible term exists anywhere in the QC sample.
class NoAudibleTermsError : public Error {
public:
    using Error::Error;
};

/// A composite score was requested while a component metric is undefined.
class MissingComponentError : public Error {
public:
    using Error::Error;
};

class UnsupportedFormatError : public Error {
public:
    using Error::Error;
};

/// A synthetic-corpus profile asks for more injections than the corpus holds.
class InfeasibleProfileError : public Error {
public:
    using Error::Error;
};

/// Input exceeds the size bound of the exhaustive oracle.
class InputTooLargeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// One problem found in an input file. line is 1-based; 0 means the whole file.
struct InputIssue {
    std::string file;
    std::size_t line = 0;
    std::string message;
};

/// Aggregates every parse problem found across the input files, not just the
/// first one, so a bad dataset can be fixed in one pass.
class ParseError : public Error {
public:
    explicit ParseError(std::vector<InputIssue> issues);
    const std::vector<InputIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<InputIssue> issues_;
};

enum class ValidationCode {
    DanglingReference,
    DuplicateId,
    EmptyTestSet,
    InconsistentAnnotation,
    InvalidField,
};

struct ValidationIssue {
    ValidationCode code;
    std::string message;
};

/// Aggregates every cross-reference and invariant violation in a dataset.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues);
    const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }
    bool has(ValidationCode code) const noexcept;

private:
    std::vector<ValidationIssue> issues_;
};

}  // namespace deepscore
