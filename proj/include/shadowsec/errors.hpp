// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace shadowsec {

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Invalid configuration document or parameter set.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure: budget exceeded, non-convergence, unsupported shape.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Closed-form path requested for non-integer shape parameters.
class ShapeIntegralityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Composition enumeration would exceed the configured term budget.
class BudgetExceededError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace shadowsec
