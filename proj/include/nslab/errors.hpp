#pragma once

#include <stdexcept>
#include <string>

namespace nslab {

/// Bad user-facing configuration (lattice spec, run config, CLI input).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A field or solution violates a required invariant (divergence-free,
/// conjugate symmetry, zero mean).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: non-finite values, eigensolver breakdown, a
/// convergence check outside its declared tolerance.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failure while reading or writing results.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nslab
