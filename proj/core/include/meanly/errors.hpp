#pragma once

#include <stdexcept>
#include <string>

namespace meanly {

// Base for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument / query outside a model's domain.
struct DomainError : Error {
    using Error::Error;
};

// Operation not supported for this operator/model combination.
struct CapabilityError : Error {
    using Error::Error;
};

// A loop-mode evaluation would exceed its iteration budget.
struct BudgetError : Error {
    using Error::Error;
};

// Adaptive quadrature failed to reach the requested tolerance.
struct QuadratureError : Error {
    double achieved_tol;
    QuadratureError(const std::string& msg, double achieved)
        : Error(msg), achieved_tol(achieved) {}
};

}  // namespace meanly
