#pragma once

#include <stdexcept>
#include <string>

namespace polya {

// Invalid argument or range supplied by a caller.
class RangeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A configured enumeration or table cap would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative numerics failed to converge.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two independent computations disagreed, or an exact identity failed.
// Always indicates a bug.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline void require(bool cond, const std::string &what)
{
    if (!cond) {
        throw RangeError(what);
    }
}

inline void check_consistency(bool cond, const std::string &what)
{
    if (!cond) {
        throw ConsistencyError(what);
    }
}

} // namespace polya
