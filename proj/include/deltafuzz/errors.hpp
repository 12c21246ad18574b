#pragma once

#include <stdexcept>
#include <string>

namespace deltafuzz {

// Base for all engine-raised errors so callers can catch the family at once.
struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PromotionError : EngineError {
    using EngineError::EngineError;
};

struct ShapeError : EngineError {
    using EngineError::EngineError;
};

struct StructureError : EngineError {
    using EngineError::EngineError;
};

struct ValidationError : EngineError {
    using EngineError::EngineError;
};

// In-band runtime trap: integer division by zero, unrepresentable casts.
// Caught by the program executor and surfaced as a Crash outcome, never a
// process abort.
struct TrapError : EngineError {
    TrapError(std::string kind, const std::string& message)
        : EngineError(kind + ": " + message), kind(std::move(kind)) {}
    std::string kind;
};

struct ParseError : std::runtime_error {
    ParseError(int line, int column, const std::string& expected)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + expected),
          line(line), column(column), expected(expected) {}
    int line;
    int column;
    std::string expected;
};

struct DuplicateVersion : EngineError {
    using EngineError::EngineError;
};

struct UnknownVersion : EngineError {
    using EngineError::EngineError;
};

struct SiteMismatch : EngineError {
    using EngineError::EngineError;
};

struct NoApplicableMutation : EngineError {
    using EngineError::EngineError;
};

struct EmptyPool : EngineError {
    using EngineError::EngineError;
};

struct LengthMismatch : EngineError {
    using EngineError::EngineError;
};

struct EmptyInput : EngineError {
    using EngineError::EngineError;
};

struct DegenerateInput : EngineError {
    using EngineError::EngineError;
};

struct TooManySets : EngineError {
    using EngineError::EngineError;
};

}  // namespace deltafuzz
