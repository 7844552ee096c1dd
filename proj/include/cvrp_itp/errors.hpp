#pragma once

#include <stdexcept>
#include <string>

namespace cvrp {

// Raised when an input violates an operation's contract (bad sizes, invalid
// indices, out-of-range parameters). The CLI maps it to exit code 2.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised on unreadable/unwritable files. The CLI maps it to exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) throw PreconditionError(message);
}

}  // namespace cvrp
