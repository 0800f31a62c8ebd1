#pragma once

#include <stdexcept>
#include <string>

namespace matchscore {

/// Bad user input: malformed files, inconsistent data, invalid configuration.
/// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical or internal solver failure. The CLI maps this to exit code 2.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace matchscore
