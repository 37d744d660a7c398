#pragma once

#include <stdexcept>
#include <string>

namespace adacal {

/// A query point fell outside the domain of a partition.
class OutOfDomain : public std::out_of_range {
public:
    explicit OutOfDomain(const std::string& what) : std::out_of_range(what) {}
};

/// Iterative solver failed to reach its residual target.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Malformed experiment configuration or environment specification.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A forecaster broke the round protocol or emitted an invalid distribution.
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace adacal
