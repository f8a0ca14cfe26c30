#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace abel {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// --- jet layer ---

class BasePointMismatch : public Error {
public:
    using Error::Error;
};

class OrderMismatch : public Error {
public:
    using Error::Error;
};

class DivisionByZeroConstantTerm : public Error {
public:
    using Error::Error;
};

class NonInvertibleJet : public Error {
public:
    using Error::Error;
};

/// An operation needed more derivative orders than the operand carries.
class OrderTooLow : public Error {
public:
    using Error::Error;
};

/// Real-branch power of a jet outside its domain (even root of a non-positive
/// constant term, or zero constant term).
class DomainError : public Error {
public:
    using Error::Error;
};

// --- expression layer ---

/// Parse failure; carries the byte offset and the token set expected there.
class SyntaxError : public Error {
public:
    SyntaxError(std::string message, std::size_t offset, std::vector<std::string> expected);
    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// The exponent of '^' must be an integer literal.
class NonIntegerExponent : public Error {
public:
    NonIntegerExponent(std::string message, std::size_t offset);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation hit a pole or branch violation; carries the offending subexpression.
class EvalDomainError : public Error {
public:
    EvalDomainError(std::string message, std::string subexpression);
    const std::string& subexpression() const { return subexpression_; }

private:
    std::string subexpression_;
};

// --- model layer ---

class UnknownFamily : public Error {
public:
    using Error::Error;
};

class MissingCoefficient : public Error {
public:
    using Error::Error;
};

class UnexpectedKey : public Error {
public:
    using Error::Error;
};

class WrongFamily : public Error {
public:
    using Error::Error;
};

class BadEquationFile : public Error {
public:
    using Error::Error;
};

// --- transform layer ---

class NonInvertibleAtPoint : public Error {
public:
    using Error::Error;
};

class NotCanonical : public Error {
public:
    using Error::Error;
};

/// The requested symbolic transform cannot be expressed in the grammar.
class UnsupportedTransform : public Error {
public:
    using Error::Error;
};

// --- invariants layer ---

class TresseDenominatorVanishes : public Error {
public:
    using Error::Error;
};

class FitFailed : public Error {
public:
    using Error::Error;
};

class UnknownInvariant : public Error {
public:
    using Error::Error;
};

// --- equivalence layer ---

class FamilyMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace abel
