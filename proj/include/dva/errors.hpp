#pragma once

#include <stdexcept>
#include <string>

namespace dva {

/// Malformed or inconsistent input data (files, schedules, parameters).
/// Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A data-file problem with a location attached (file, 1-based row and column).
class DataError : public ValidationError {
public:
    DataError(const std::string& file, int row, int column, const std::string& what)
        : ValidationError(format(file, row, column, what)), file_(file), row_(row), column_(column) {}

    const std::string& file() const noexcept { return file_; }
    int row() const noexcept { return row_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& file, int row, int column, const std::string& what) {
        std::string loc = file;
        if (row > 0) loc += ":" + std::to_string(row);
        if (column > 0) loc += ":" + std::to_string(column);
        return loc + ": " + what;
    }

    std::string file_;
    int row_;
    int column_;
};

/// An iterative numerical method failed to reach its tolerance.
/// Maps to CLI exit code 2.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dva
