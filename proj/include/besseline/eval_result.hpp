#pragma once

#include <stdexcept>
#include <string>

namespace besseline {

// Numeric result carrying a conservative absolute error bound.
struct EvalResult {
    double value = 0.0;
    double abs_error_bound = 0.0;
};

// Argument outside the validity domain of the requested operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Result would exceed the double range; caller should use a scaled variant.
class OverflowSignal : public std::overflow_error {
public:
    explicit OverflowSignal(const std::string& what) : std::overflow_error(what) {}
};

// Iteration cap or tolerance failure; best estimate attached.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, EvalResult best)
        : std::runtime_error(what), best_(best) {}
    const EvalResult& best_estimate() const noexcept { return best_; }

private:
    EvalResult best_;
};

}  // namespace besseline
