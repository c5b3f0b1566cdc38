#pragma once

#include <stdexcept>
#include <string>

namespace gembed {

// Error families map onto the CLI exit codes: io_error -> 2,
// config_error -> 3, numerical_error -> 4.

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gembed
