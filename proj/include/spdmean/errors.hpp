#pragma once

#include <stdexcept>
#include <string>

namespace spdmean {

/// Operand shapes disagree (square-ness, N mismatch, empty sets).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A matrix expected to be SPD has an eigenvalue at or below the relative floor.
class NotPositiveDefinite : public std::domain_error {
public:
    NotPositiveDefinite(const std::string& what, double eigenvalue)
        : std::domain_error(what), eigenvalue_(eigenvalue) {}

    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

/// A transform that must be invertible is numerically singular.
class SingularMatrix : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Eigensolver failure or overflow of a spectral function.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

}  // namespace spdmean
