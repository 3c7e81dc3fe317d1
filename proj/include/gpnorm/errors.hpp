#pragma once

#include <stdexcept>
#include <string>

namespace gpnorm {

// Malformed or out-of-contract input. The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numeric result could not be certified. The CLI maps these to exit code 3.
class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public InputError {
public:
    using InputError::InputError;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t position)
        : InputError(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class ZeroPolynomial : public InputError {
public:
    ZeroPolynomial() : InputError("zero polynomial") {}
};

class BudgetTooSmall : public InputError {
public:
    using InputError::InputError;
};

class OverflowError : public InputError {
public:
    using InputError::InputError;
};

// Could not find enough CRT primes q = 1 (mod p) below the word bound.
class PrimePoolExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Some factor of the norm product vanishes exactly.
class DeltaZero : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// alpha^p = 1, so log|alpha^p - 1| is -infinity.
class PoleAtOne : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public CertificationError {
public:
    using CertificationError::CertificationError;
};

class Indeterminate : public CertificationError {
public:
    using CertificationError::CertificationError;
};

// Shortest-vector enumeration hit its node limit; certified_lower_bound is the
// sup-norm below which no qualifying vector exists.
class EnumerationLimit : public std::runtime_error {
public:
    EnumerationLimit(const std::string& what, long long certified_lower_bound)
        : std::runtime_error(what), lower_bound_(certified_lower_bound) {}
    long long certified_lower_bound() const noexcept { return lower_bound_; }

private:
    long long lower_bound_;
};

}  // namespace gpnorm
