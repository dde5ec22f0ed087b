#pragma once

#include <stdexcept>
#include <string>

namespace roadwork {

// Base for everything thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad configuration: missing keys, malformed templates, unknown profiles.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Invalid input data or arguments: out-of-range values, malformed files.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

} // namespace roadwork
