#pragma once

#include <stdexcept>
#include <string>

namespace schottky {

// Base class for all engine errors; subcommands map these to exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation of a Moebius map at (or too close to) its pole.
class PoleError : public Error {
public:
    using Error::Error;
};

// Displacement length requested for a non-hyperbolic element.
class NonHyperbolicError : public Error {
public:
    using Error::Error;
};

// Disk system violates the Schottky conditions in a way that prevents use.
class InvalidGroupError : public Error {
public:
    using Error::Error;
};

// No disk configuration satisfies the Schottky condition for the
// requested funnel lengths; message carries the failed margin.
class InfeasibleConfigurationError : public Error {
public:
    using Error::Error;
};

class NonReducedWordError : public Error {
public:
    using Error::Error;
};

// Word enumeration would exceed the configured budget.
class WordBudgetError : public Error {
public:
    using Error::Error;
};

// Iterative solver failed to reach its tolerance; message carries the
// achieved residual.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// An argument-principle count could not be certified (non-integer
// integral, quadrature failure, or subdivision depth exhausted).
class CertificateError : public Error {
public:
    using Error::Error;
};

// Config file syntax error with location.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(msg), line(line), column(column) {}
    int line;
    int column;
};

// Config is well-formed but a field value is invalid.
class SemanticError : public Error {
public:
    SemanticError(const std::string& msg, std::string field_name)
        : Error(msg), field(std::move(field_name)) {}
    std::string field;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace schottky
