#pragma once

#include <stdexcept>
#include <string>

namespace rsthp
{
    // Invalid experiment or system configuration. Maps to CLI exit code 2.
    class ConfigError : public std::invalid_argument
    {
    public:
        explicit ConfigError(const std::string &what) : std::invalid_argument(what) {}
    };

    // Generic numerical failure (non-convergence, non-finite values). Exit code 3.
    class NumericError : public std::runtime_error
    {
    public:
        explicit NumericError(const std::string &what) : std::runtime_error(what) {}
    };

    // Matrix is numerically rank deficient. The Monte-Carlo driver resamples on this.
    class RankError : public NumericError
    {
    public:
        explicit RankError(const std::string &what) : NumericError(what) {}
    };

    // Argument outside the domain of an operation (zero combiner, shape mismatch, ...).
    class DomainError : public std::domain_error
    {
    public:
        explicit DomainError(const std::string &what) : std::domain_error(what) {}
    };
}
