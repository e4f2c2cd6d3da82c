#pragma once

#include <stdexcept>
#include <string>

namespace starfode {

/// A series or quadrature failed to reach the requested tolerance.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A linear or matrix-equation solve failed (singularity, spectral clash).
class solver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iteration stopped making progress before reaching its tolerance.
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A matrix function hit the branch cut of the principal logarithm.
class branch_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration file failed validation (syntax, schema, unknown keys).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace starfode
