#pragma once

#include <stdexcept>
#include <string>

namespace kqm {

struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Fields defined on different grids were combined.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientSignal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace kqm
