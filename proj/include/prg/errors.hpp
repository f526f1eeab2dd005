#pragma once

#include <stdexcept>
#include <string>

namespace prg {

// Base class for all errors raised by this library.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Shapes or index ranges do not line up (matrix products, tensor
// contractions, slot counts, ...).
struct dimension_error : error {
    explicit dimension_error(const std::string& what) : error(what) {}
};

// A documented precondition was violated (singular matrix where an
// invertible one is required, inhomogeneous polynomial where a graded one
// is required, ...).
struct precondition_error : error {
    explicit precondition_error(const std::string& what) : error(what) {}
};

// An enumeration hit its configured resource budget before reaching a
// conclusion.  Callers that can degrade gracefully catch this and report
// an inconclusive status instead.
struct budget_error : error {
    explicit budget_error(const std::string& what) : error(what) {}
};

// Malformed textual or JSON input.
struct parse_error : error {
    explicit parse_error(const std::string& what) : error(what) {}
};

} // namespace prg
