#pragma once

#include <stdexcept>
#include <string>

namespace aniso {

// Invalid configuration or parameters: maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (divergent Newton, solver breakdown, ...): CLI exit code 3.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace aniso
