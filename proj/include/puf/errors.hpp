#pragma once

#include <stdexcept>
#include <string>

namespace puf {

// Error hierarchy. The CLI maps these onto exit codes: usage/domain
// problems with the input are 2, internal failures are 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller supplied something malformed (mismatched fields, bad option).
struct UsageError : Error {
    using Error::Error;
};

// Input outside the mathematical domain of an operation
// (non-squarefree d, non-totally-positive form, ...).
struct DomainError : Error {
    using Error::Error;
};

struct ArithmeticError : Error {
    using Error::Error;
};

// A hypothesis of a closed-form construction does not hold.
struct HypothesisViolation : DomainError {
    using DomainError::DomainError;
};

// Operation only defined for d = 2, 3 mod 4.
struct NotApplicable : DomainError {
    using DomainError::DomainError;
};

// Exhaustive search ran out of its bound without finding a solution.
struct SearchExhausted : Error {
    using Error::Error;
};

// Iteration caps, impossible branches. Always a bug.
struct InternalError : Error {
    using Error::Error;
};

} // namespace puf
