#pragma once

#include <stdexcept>
#include <string>

namespace antcdm {

/// Input outside the mathematical domain of an operation (negative population,
/// state off the simplex, normalized population outside [0,1], ...).
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// The integrator produced a non-finite state.
class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::size_t step() const noexcept { return step_; }

  private:
    std::size_t step_;
};

/// Least-squares system could not be solved (rank deficient or malformed grid).
class FitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace antcdm
