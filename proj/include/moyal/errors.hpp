#pragma once

#include <stdexcept>
#include <string>

namespace moyal {

/// Inconsistent arguments, e.g. operands carrying different hbar values.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input outside the domain of an operation (non-normalizable Gaussian, bad support, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// The Gaussian integral behind a star product does not exist.
class NonintegrableError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A series or iteration failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Integration box does not capture enough of the integrand's mass.
class BoxTooSmallError : public std::runtime_error {
  public:
    BoxTooSmallError(const std::string& what, double qmin, double qmax, double pmin, double pmax)
        : std::runtime_error(what), required_qmin(qmin), required_qmax(qmax),
          required_pmin(pmin), required_pmax(pmax) {}

    double required_qmin, required_qmax, required_pmin, required_pmax;
};

}  // namespace moyal
