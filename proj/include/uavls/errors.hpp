#pragma once

#include <stdexcept>
#include <string>

namespace uavls {

/// Thrown when an adaptive quadrature fails to reach its tolerance within
/// the subdivision budget. Carries the best estimate obtained so far.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(const std::string& what, double partial_estimate)
        : std::runtime_error(what), partial_(partial_estimate) {}

    double partial_estimate() const { return partial_; }

private:
    double partial_;
};

/// Thrown when a bracketing root finder cannot locate a sign change.
class solver_error : public std::runtime_error {
public:
    solver_error(const std::string& what, double bracket_lo, double bracket_hi)
        : std::runtime_error(what), lo_(bracket_lo), hi_(bracket_hi) {}

    double bracket_lo() const { return lo_; }
    double bracket_hi() const { return hi_; }

private:
    double lo_;
    double hi_;
};

/// Scenario/config file problem. line == 0 means no line attribution.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

}  // namespace uavls
