#pragma once

#include <stdexcept>
#include <string>

namespace diffsimo {

// Unsupported or inconsistent configuration (constellation order, variances, grids).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Amplitude or point lookup that matches nothing in a constellation.
class LookupError : public std::out_of_range {
public:
    explicit LookupError(const std::string& what) : std::out_of_range(what) {}
};

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Caller misuse: dimension mismatches, empty inputs, invalid option combinations.
class UsageError : public std::invalid_argument {
public:
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace diffsimo
