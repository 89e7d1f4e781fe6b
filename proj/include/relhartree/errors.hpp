#pragma once

#include <stdexcept>
#include <string>

namespace relhartree {

// Exit-code contract: 1 config, 2 numerical failure (NaN/guard), 3 oracle failure.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct OracleFailure : std::runtime_error {
    explicit OracleFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace relhartree
