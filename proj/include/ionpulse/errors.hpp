#ifndef IONPULSE_ERRORS_HPP
#define IONPULSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ionpulse {

// Invalid physical/numerical configuration (bad dimensions, bad spec fields).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Operator dimensions do not match.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Driving regime for which no closed forms exist (n >= m).
class RegimeError : public std::domain_error {
public:
    explicit RegimeError(const std::string& msg) : std::domain_error(msg) {}
};

// Time integration failed (step underflow or unitarity defect exceeded).
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& msg, double t)
        : std::runtime_error(msg + " at t=" + std::to_string(t)), time(t) {}
    double time;
};

// Quadrature oracle failed to converge within the refinement cap.
class OracleError : public std::runtime_error {
public:
    explicit OracleError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad command line / config file usage.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& msg) : std::invalid_argument(msg) {}
};

} // namespace ionpulse

#endif
