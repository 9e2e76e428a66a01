#pragma once

#include <stdexcept>
#include <string>

namespace sobnum {

// Base class for all errors raised by this library. The CLI maps these to
// exit code 2 (usage / domain errors).
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter outside its mathematical domain (e.g. s <= 0, p <= 2).
struct DomainError : Error {
    using Error::Error;
};

// Index vector length does not match the family dimension.
struct DimensionMismatch : Error {
    using Error::Error;
};

// The requested embedding does not exist (summability criterion fails).
struct EmbeddingError : Error {
    using Error::Error;
};

// A count or level value exceeded the representable range.
struct OverflowError : Error {
    using Error::Error;
};

// Configured step budget exhausted before the computation finished.
struct BudgetExceeded : Error {
    using Error::Error;
};

// Level-table memory budget exceeded.
struct MemoryBudgetError : Error {
    using Error::Error;
};

// Malformed family spec or range string.
struct ParseError : Error {
    using Error::Error;
};

}  // namespace sobnum
