#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace pa {

using Q = mpq_class;

// Thrown on malformed input (exit code 2).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when ingredients fail a mathematical validity check (exit code 1).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a configured size cap is exceeded (exit code 3).
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an internal invariant fails (exit code 3).
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses "num/den" or "num"; den must be positive.
Q parse_rational(const std::string& s);
std::string format_rational(const Q& q);

}  // namespace pa
