#pragma once

#include <stdexcept>
#include <string>

namespace reidrank {

/// Invalid parameters or configuration (bad k1/k2, out-of-range weights, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent data (malformed manifests, shape mismatches, NaNs, ...).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace reidrank
