#pragma once

#include <stdexcept>
#include <string>

namespace dynloc {

// Error categories that the CLI maps to exit codes:
//   config_error -> 2, accuracy_error -> 3, io_error -> 4.
// Contract violations on library entry points throw std::invalid_argument,
// which the CLI also treats as a configuration problem.

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct accuracy_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace dynloc
