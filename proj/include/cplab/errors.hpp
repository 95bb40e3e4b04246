#pragma once

#include <stdexcept>
#include <string>

namespace cplab {

// Invalid configuration: bad changepoints, infeasible settings, malformed specs.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dimension mismatch between matrices/vectors.
class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A guarded operation refused to run (e.g. brute-force oracle above its size cap).
class GuardError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Filesystem failures surfaced to the CLI as exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cplab
