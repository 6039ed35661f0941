#pragma once

#include <stdexcept>
#include <string>

namespace dynatda {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// malformed or inconsistent input data
struct validation_error : error {
    using error::error;
};

// grid / axis / parameter mismatch
struct config_error : error {
    using error::error;
};

// brute-force routine refused an oversized input
struct size_cap_error : error {
    using error::error;
};

// a self-check on computed output failed
struct invariant_violation : error {
    using error::error;
};

}  // namespace dynatda
