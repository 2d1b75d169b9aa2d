#pragma once

#include <stdexcept>
#include <string>

namespace floq {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct PullbackError : std::runtime_error {
    PullbackError(const std::string& what, double last_distance)
        : std::runtime_error(what), last_distance(last_distance) {}
    double last_distance;
};

struct DegenerateBundleError : std::runtime_error {
    explicit DegenerateBundleError(const std::string& what) : std::runtime_error(what) {}
};

struct SeparationError : std::runtime_error {
    explicit SeparationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace floq
