#pragma once

#include <stdexcept>
#include <string>

namespace arithdyn {

// Bad arguments: malformed input, degree mismatch, zero polynomial where a
// nonzero one is required.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A parameter value at which the family degenerates (resultant vanishes,
// a mark becomes (0:0)).
class DegenerateParameter : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Iteration caps or numeric failures.  Carries the best iterate found so far.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double worst_residual)
        : std::runtime_error(what), worst_residual_(worst_residual) {}
    double worst_residual() const { return worst_residual_; }

private:
    double worst_residual_;
};

// Memory or degree budget exhausted.  `partial` is the last completed step.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, int partial)
        : std::runtime_error(what), partial_(partial) {}
    int partial() const { return partial_; }

private:
    int partial_;
};

// The request is structurally meaningless (e.g. a_n - a_m vanishes identically).
class StructuralError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace arithdyn
