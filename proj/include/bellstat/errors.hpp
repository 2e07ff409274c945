#pragma once

#include <stdexcept>
#include <string>

namespace bellstat {

// Base class for everything this library throws, so callers can catch one
// type at the CLI boundary and map it onto an exit code.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Unknown embedded-dataset name.
class NotFoundError : public Error {
public:
    using Error::Error;
};

// Malformed JSON/CSV input; message carries row/field location.
class ParseError : public Error {
public:
    using Error::Error;
};

// Data that cannot be analyzed: empty tables, zero-trial blocks.
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of a tail function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Model parameters whose reconstructed cell probabilities leave [0,1].
class InfeasibleParamsError : public Error {
public:
    using Error::Error;
};

// Likelihood geometry this library does not handle (more than one CHSH
// facet violated at the unconstrained optimum).
class UnsupportedGeometryError : public Error {
public:
    using Error::Error;
};

}  // namespace bellstat
