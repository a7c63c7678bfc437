#pragma once

#include <stdexcept>

namespace dejd {

// Bad run configuration or invalid parameter values supplied by the caller.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unusable input data (malformed rows, non-positive prices, too few points).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical routine failed to make progress (should not happen on sane inputs).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dejd
