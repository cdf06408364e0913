#pragma once

#include <stdexcept>

namespace nbmr {

// Invalid parameters or malformed input; CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Code construction gave up (rank repair budget, impossible target, ...);
// CLI maps this to exit code 3.
struct construction_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable or corrupt code/observation file; CLI maps this to exit code 2.
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace nbmr
