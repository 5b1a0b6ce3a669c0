#ifndef RINGWELL_ERRORS_HPP
#define RINGWELL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ringwell {

// Parameter or configuration violates a documented precondition.
struct InvalidParams : std::invalid_argument {
    explicit InvalidParams(const std::string& what) : std::invalid_argument(what) {}
};

// A log weight left the representable exponent range.
struct OverflowError : std::runtime_error {
    explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

// Schedule entry could not be pinned to its well even after bisection correction.
struct ScheduleInfeasible : std::runtime_error {
    explicit ScheduleInfeasible(const std::string& what) : std::runtime_error(what) {}
};

// Lattice simulation requested outside the moderate regime where raw widths
// are representable in double precision.
struct RegimeViolation : std::runtime_error {
    explicit RegimeViolation(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ringwell

#endif
