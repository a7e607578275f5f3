#pragma once

#include <stdexcept>
#include <string>

namespace stochlab {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Iterative evaluation that ran out of budget; keeps the best value reached.
struct NumericError : std::runtime_error {
    double partial;
    NumericError(const std::string& what, double partial_value)
        : std::runtime_error(what), partial(partial_value) {}
};

struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

struct SingularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace stochlab
