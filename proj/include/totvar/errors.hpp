#pragma once

#include <stdexcept>
#include <string>

namespace totvar {

// Parameter/configuration problems (CLI exit code 2).
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A built-in numerical assertion failed (CLI exit code 3).
struct check_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented resource bound would be exceeded (CLI exit code 4).
struct bound_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace totvar
