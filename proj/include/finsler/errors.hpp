#pragma once

#include <stdexcept>
#include <string>

namespace finsler {

// Base class for every error raised by this library. The what() string always
// carries enough context to locate the failure (token position, offending
// value, subexpression, ...).
class Error : public std::runtime_error {
public:
    explicit Error(std::string msg) : std::runtime_error(std::move(msg)) {}
};

// Argument outside the mathematical domain of an operation (log of a
// non-positive value, division by a zero-valued jet, point outside a declared
// admissible region, ...).
class DomainError : public Error {
public:
    explicit DomainError(std::string msg) : Error(std::move(msg)) {}
};

// Jets from incompatible truncation spaces combined in one expression.
class SpaceMismatch : public Error {
public:
    explicit SpaceMismatch(std::string msg) : Error(std::move(msg)) {}
};

// A partial derivative was requested beyond the truncation (or validity)
// order of a jet.
class OrderExceeded : public Error {
public:
    explicit OrderExceeded(std::string msg) : Error(std::move(msg)) {}
};

// Fundamental tensor or Riemannian metric with non-positive determinant.
class SingularMetric : public Error {
public:
    explicit SingularMetric(std::string msg) : Error(std::move(msg)) {}
};

// A quadrature did not reach the requested tolerance at maximum refinement.
class QuadratureNonConvergence : public Error {
public:
    explicit QuadratureNonConvergence(std::string msg) : Error(std::move(msg)) {}
};

// A 1-form with (numerically) vanishing norm where b^2 > 0 is required.
class DegenerateForm : public Error {
public:
    explicit DegenerateForm(std::string msg) : Error(std::move(msg)) {}
};

// A structural denominator (4 + (k1+3k2)b^2, or the deformation locus) too
// close to zero for the requested evaluation.
class DegenerateDenominator : public Error {
public:
    explicit DegenerateDenominator(std::string msg) : Error(std::move(msg)) {}
};

// An operation's stated precondition does not hold for the given input.
class PreconditionFailed : public Error {
public:
    explicit PreconditionFailed(std::string msg) : Error(std::move(msg)) {}
};

// Scalar fields supplied for a metric family violate the structure equations.
class StructureViolation : public Error {
public:
    explicit StructureViolation(std::string msg) : Error(std::move(msg)) {}
};

// Malformed expression text.
class SyntaxError : public Error {
public:
    SyntaxError(std::string msg, std::size_t position)
        : Error(msg + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Identifier that is not a known variable, constant or function.
class UnknownIdentifier : public Error {
public:
    explicit UnknownIdentifier(const std::string& name)
        : Error("unknown identifier '" + name + "'"), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

// Invalid scenario / configuration input.
class ConfigError : public Error {
public:
    explicit ConfigError(std::string msg) : Error(std::move(msg)) {}
};

} // namespace finsler
