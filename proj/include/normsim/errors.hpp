#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace normsim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by the spec-language front end; carries a source position.
struct ParseError : Error {
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line(line), column(column) {}
    std::size_t line;
    std::size_t column;
};

struct TypeError : Error {
    using Error::Error;
};

// Malformed certificate (unknown state ids, shape errors). Distinct from a
// check failure: a malformed certificate is an input error, not a violation.
struct CertificateError : Error {
    using Error::Error;
};

struct BudgetError : Error {
    using Error::Error;
};

// Raised by the forward VC generator when the upper specification is not in
// the required explicitly-listed form.
struct AssumptionViolated : Error {
    AssumptionViolated(const std::string& assumption, const std::string& detail)
        : Error("assumption " + assumption + " violated: " + detail), assumption(assumption) {}
    std::string assumption;  // "finitestart" or "finitetransitions"
};

}  // namespace normsim
