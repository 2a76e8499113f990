#pragma once

#include <stdexcept>
#include <string>

namespace qgad {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed Hamiltonian/recipe text. Carries 1-based line and column.
struct ParseError : Error {
    ParseError(const std::string& what, int line, int column)
        : Error("parse error at line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + what),
          line(line),
          column(column) {}
    int line;
    int column;
};

/// Operator or register exceeds a storage/enumeration cap.
struct DimensionError : Error {
    using Error::Error;
};

/// Precondition or contract violation (invalid recipe, width mismatch, bad grid...).
struct ValidationError : Error {
    using Error::Error;
};

/// Numerical failure: gap collapse, solver non-convergence, degenerate ground space.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace qgad
