#pragma once

#include <stdexcept>
#include <string>

namespace qcircle {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition or invalid configuration.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A field is nonzero where it was declared (or required) to vanish.
class SupportError : public DomainError {
public:
    using DomainError::DomainError;
};

/// An iterative method exhausted its iteration budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace qcircle
