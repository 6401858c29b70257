#pragma once

#include <stdexcept>
#include <string>

namespace quatcong {

// Each error class carries the process exit code the CLI maps it to.

/// Malformed or inconsistent input (bad config, violated precondition).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
    static constexpr int exit_code = 2;
};

/// A case the library deliberately refuses to decide (2-adic data over a
/// real quadratic base with even-norm theta, unsupported field degree).
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    static constexpr int exit_code = 3;
};

/// Brute-force enumeration would exceed its search-space guard.
class GuardExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    static constexpr int exit_code = 4;
};

/// Two independent computations of the same quantity disagree.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
    static constexpr int exit_code = 5;
};

inline void require(bool cond, const std::string& what)
{
    if (!cond) throw ConfigError(what);
}

inline void ensure(bool cond, const std::string& what)
{
    if (!cond) throw ConsistencyError(what);
}

}  // namespace quatcong
