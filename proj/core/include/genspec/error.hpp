#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace genspec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible with the requested operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Raised when sigma_min <= tol_sing * sigma_max.
class SingularMatrix : public Error {
public:
    SingularMatrix(const std::string& what, double sigma_min, double sigma_max)
        : Error(what), sigma_min_(sigma_min), sigma_max_(sigma_max) {}

    double sigma_min() const noexcept { return sigma_min_; }
    double sigma_max() const noexcept { return sigma_max_; }

private:
    double sigma_min_;
    double sigma_max_;
};

/// An iterative kernel (eigensolver, node search) hit its iteration cap,
/// or a computed result failed its residual check.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Unreadable or inconsistent input (missing file, bad header).
class InputError : public Error {
public:
    using Error::Error;
};

/// Malformed matrix file. Line and column are 1-based; 0 means unknown.
class ParseError : public InputError {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : InputError(format(message, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, std::size_t line, std::size_t column) {
        if (line == 0) return message;
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    }

    std::size_t line_;
    std::size_t column_;
};

} // namespace genspec
