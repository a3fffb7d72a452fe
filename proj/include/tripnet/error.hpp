#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tripnet {

/// Root of every error the library raises. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not line up.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Caller passed an out-of-contract argument.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Malformed text input (CSV, grid strings).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Columns or feature layouts that do not match the expected schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A feature with zero variance cannot be standardized.
class DegenerateFeatureError : public SchemaError {
public:
    explicit DegenerateFeatureError(std::string column)
        : SchemaError("degenerate feature '" + column + "': standard deviation is zero"),
          column_(std::move(column)) {}

    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

/// A public arithmetic operation produced NaN or infinity.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Training blew up. Carries the (zero-based) epoch and minibatch where it happened.
class DivergenceError : public NumericError {
public:
    DivergenceError(std::size_t epoch, std::size_t batch, const std::string& detail)
        : NumericError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                       std::to_string(batch) + ": " + detail),
          epoch_(epoch),
          batch_(batch) {}

    std::size_t epoch() const noexcept { return epoch_; }
    std::size_t batch() const noexcept { return batch_; }

private:
    std::size_t epoch_;
    std::size_t batch_;
};

/// Every grid cell diverged.
class TuneError : public Error {
public:
    using Error::Error;
};

/// MAPE is undefined at a zero actual value.
class ZeroActualError : public Error {
public:
    explicit ZeroActualError(std::size_t index)
        : Error("actual value at index " + std::to_string(index) +
                " is zero; MAPE is undefined (use the exclude policy to skip)"),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class EmptyEvaluationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Model document carries a schema_version this build does not read.
class VersionError : public Error {
public:
    using Error::Error;
};

/// Model document is internally inconsistent.
class CorruptionError : public Error {
public:
    using Error::Error;
};

}  // namespace tripnet
