#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace canonform {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Operation requires an even (or odd) size that the input does not have.
class ParityError : public Error {
public:
    using Error::Error;
};

class SingularError : public Error {
public:
    using Error::Error;
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, std::size_t max_iterations)
        : Error(what), max_iterations_(max_iterations) {}
    std::size_t max_iterations() const { return max_iterations_; }

private:
    std::size_t max_iterations_;
};

class NotCommutingError : public Error {
public:
    using Error::Error;
};

class DefectiveError : public Error {
public:
    using Error::Error;
};

class NotNormalError : public Error {
public:
    using Error::Error;
};

class NotHermitianError : public Error {
public:
    using Error::Error;
};

class NonRealSpectrumError : public Error {
public:
    using Error::Error;
};

/// A nonreal eigenvalue cluster has no conjugate partner of equal multiplicity.
class ConjugatePairMismatchError : public Error {
public:
    using Error::Error;
};

/// A Gram matrix failed to produce the inertia required for a congruence step.
class CongruenceError : public Error {
public:
    using Error::Error;
};

/// A reduction stage produced residuals beyond its tolerance budget, usually
/// because the input sits on a clustering-tolerance boundary.
class StageValidationError : public Error {
public:
    using Error::Error;
};

class SizeCapError : public Error {
public:
    using Error::Error;
};

class AlphaSearchError : public Error {
public:
    using Error::Error;
};

class SearchExhaustedError : public Error {
public:
    using Error::Error;
};

class SpectrumPairingError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class UnsupportedFormatError : public Error {
public:
    using Error::Error;
};

}  // namespace canonform
