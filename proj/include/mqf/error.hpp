#pragma once

#include <stdexcept>
#include <string>

namespace mqf {

// Base of every error the library throws. The CLI maps all of these to exit
// status 3 with the message as the diagnostic.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on a numeric argument was violated (pole, non-positive
// definite input, divergent integral, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Operation requested for an algebra it does not support (octonion matrices).
class UnsupportedAlgebra : public Error {
public:
    using Error::Error;
};

class RankError : public Error {
public:
    using Error::Error;
};

class IndefiniteInput : public DomainError {
public:
    using DomainError::DomainError;
};

class NonNormalizable : public DomainError {
public:
    using DomainError::DomainError;
};

// Series coefficient hits an exact zero in a denominator.
class PoleError : public DomainError {
public:
    PoleError(const std::string& what, int degree) : DomainError(what), degree_(degree) {}
    int degree() const noexcept { return degree_; }

private:
    int degree_;
};

class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace mqf
