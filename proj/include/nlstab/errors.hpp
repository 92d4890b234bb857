#pragma once

#include <stdexcept>
#include <string>

namespace nlstab {

/// Argument outside the domain where a formula or model is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Model parameters that violate the admissible ranges (0 < alpha < d-1, beta > 0, gamma > 0).
class InvalidParameters : public DomainError {
public:
    using DomainError::DomainError;
};

class UnsupportedDimension : public DomainError {
public:
    explicit UnsupportedDimension(int d)
        : DomainError("unsupported dimension d=" + std::to_string(d) +
                      " (numerical sphere support is limited to d in {2,3})"),
          dimension_(d) {}
    int dimension() const noexcept { return dimension_; }

private:
    int dimension_;
};

/// A numerical procedure could not reach the requested tolerance. Carries the
/// best estimate it did reach so callers can report it.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double estimate, double achieved_error)
        : std::runtime_error(what), estimate_(estimate), achieved_error_(achieved_error) {}
    double estimate() const noexcept { return estimate_; }
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double estimate_;
    double achieved_error_;
};

/// Two independent evaluation routes of the same quantity disagree. Signals a
/// formula or implementation bug rather than bad input.
class ComputationError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace nlstab
