#pragma once

#include <stdexcept>
#include <string>

namespace monotrend {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on an argument was violated (bad sizes, out-of-domain
/// parameters, non-causal filters, malformed grids, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A query location fell outside the supported domain.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// The constraint location leaves one side of the split empty.
class DegenerateConstraint : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A nuisance-parameter estimate is unusable (e.g. a non-positive
/// derivative estimate where a positive slope is required).
class InvalidNuisance : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// A numerical procedure failed (e.g. a circulant embedding produced a
/// materially negative eigenvalue).
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// The requested combination of options is not supported.
class Unsupported : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Malformed input data (CSV/JSON parse problems); carries file context.
class DataError : public Error {
public:
    using Error::Error;
};

} // namespace monotrend
