#pragma once

#include <stdexcept>
#include <string>

namespace nbmeans {

/// Raised for arguments that violate a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Method-of-moments dispersion has no positive solution (s^2 <= mean).
class DispersionInestimable : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Bernstein support collapsed to a point (every observation is zero).
class DegenerateContext : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed input file, config, or results table.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nbmeans
