#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tickfever {

/// Invalid input rejected before any computation (bad parameters, grids,
/// configuration files). Maps to CLI exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parse/validation failure in a scenario configuration file.
class ConfigError : public InputError {
public:
    using InputError::InputError;
};

/// A computation that started but could not produce a trustworthy result
/// (non-finite values, non-convergence, divergence). Maps to exit code 3.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite value produced while stepping an ODE.
class IntegrationFailure : public NumericalFailure {
public:
    IntegrationFailure(std::size_t step, int component, const std::string& component_name)
        : NumericalFailure("non-finite value in component " + component_name + " at step " +
                           std::to_string(step)),
          step_(step),
          component_(component) {}

    [[nodiscard]] std::size_t step() const { return step_; }
    [[nodiscard]] int component() const { return component_; }

private:
    std::size_t step_;
    int component_;
};

}  // namespace tickfever
