#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace netstat {

/// Operation is not defined for the graph's format or weight type.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation (unknown node,
/// zero-weight node under D^{-1/2}, empty graph, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An iterative solver exhausted its restart budget.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> residuals)
        : std::runtime_error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

}  // namespace netstat
