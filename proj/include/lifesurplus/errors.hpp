#pragma once

#include <stdexcept>
#include <string>

namespace lifesurplus {

// Thrown when an integrator or solver produces non-finite values.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when two independent computations of the same quantity disagree
// beyond tolerance.
struct consistency_error : std::runtime_error {
    explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on malformed configuration input. `line` is 1-based when known,
// 0 when the error is structural rather than syntactic.
struct config_error : std::runtime_error {
    config_error(const std::string& what, int line_ = 0)
        : std::runtime_error(what), line(line_) {}
    int line;
};

}  // namespace lifesurplus
