#pragma once

#include <stdexcept>
#include <string>

namespace volkov {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical precondition failed: parameter out of its domain, a query
/// outside a tabulated range, a separation constant that must be nonzero.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A sampling or quadrature grid cannot support the requested computation
/// (mismatched grids, Nyquist violation, too few samples for a fit).
class GridError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed or schema-violating input document.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace volkov
