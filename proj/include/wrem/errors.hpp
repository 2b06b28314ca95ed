#pragma once

#include <stdexcept>
#include <string>

namespace wrem {

// Bad input: parameters outside their documented domain.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numeric procedure ran out of budget. Carries the best value reached.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best, double achieved_tol)
        : std::runtime_error(what), best_estimate(best), achieved_tolerance(achieved_tol) {}
    double best_estimate;
    double achieved_tolerance;
};

// A configured size cap would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace wrem
