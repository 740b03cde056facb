#ifndef FAIRLENS_ERRORS_HPP_
#define FAIRLENS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace fairlens {

// Bad or missing configuration (unknown key, unmapped column, invalid value).
// The message names the offending config key so the CLI can surface it.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or unusable input data (empty log, invalid record).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally invalid model (disconnected net, unreachable transition).
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fairlens

#endif
