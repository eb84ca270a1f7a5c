#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace powerdiff {

/// Fractional power or logarithm requested at a nonpositive state.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid model, simulation, estimator or experiment parameters.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The path carries no information for the requested estimate
/// (too short, or constant so every increment vanishes).
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root search failed to bracket a solution. Carries the sampled residual
/// curve as (argument, residual) pairs.
class NoSolutionError : public std::runtime_error {
public:
    NoSolutionError(const std::string& what, std::vector<std::pair<double, double>> residuals)
        : std::runtime_error(what), residuals_(std::move(residuals)) {}

    const std::vector<std::pair<double, double>>& residuals() const noexcept { return residuals_; }

private:
    std::vector<std::pair<double, double>> residuals_;
};

}  // namespace powerdiff
