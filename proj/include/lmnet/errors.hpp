#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lmnet {

/// Base of every lmnet-specific error.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Problems with user-supplied data files or configuration values.
/// The CLI maps these to exit code 2.
struct DataError : Error {
    using Error::Error;
};

struct MissingColumnError : DataError {
    explicit MissingColumnError(const std::string& column_name)
        : DataError("missing column: " + column_name), column(column_name) {}
    std::string column;
};

struct MalformedNumberError : DataError {
    MalformedNumberError(std::size_t line_number, const std::string& column_name,
                         const std::string& token)
        : DataError("line " + std::to_string(line_number) + ", column " + column_name +
                    ": malformed number '" + token + "'"),
          line(line_number),
          column(column_name) {}
    std::size_t line;
    std::string column;
};

struct NonBinaryLabelError : DataError {
    NonBinaryLabelError(std::size_t line_number, const std::string& token)
        : DataError("line " + std::to_string(line_number) + ": label '" + token +
                    "' is not 0 or 1"),
          line(line_number) {}
    std::size_t line;
};

/// A stratified split cannot be formed (a class is missing or the set is too small).
struct InsufficientClassMembersError : DataError {
    using DataError::DataError;
};

/// Invalid flag/config-file values. CLI exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

/// File open/read/write failures. CLI exit code 1.
struct IoError : Error {
    using Error::Error;
};

/// Raised by solve_spd when the factorization hits a non-positive pivot.
/// The LM loop responds by raising lambda and retrying; nothing is patched.
struct IndefiniteSystemError : Error {
    using Error::Error;
};

}  // namespace lmnet
