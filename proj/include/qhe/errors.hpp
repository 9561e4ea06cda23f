#pragma once

#include <stdexcept>
#include <string>

namespace qhe {

/// Rejected input: a value outside the domain an operation accepts.
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A requested quantity does not exist for this cycle (zero heat intake, unreachable occupation).
struct Degenerate : std::domain_error {
    using std::domain_error::domain_error;
};

/// Adaptive quadrature hit its depth or interval limit before meeting the tolerance.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or semantically invalid configuration document.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qhe
