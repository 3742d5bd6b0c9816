#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace osc {

/// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- differentiation / arithmetic ------------------------------------------

struct DivisionByZero : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// Finite-difference residuals failed to contract on a black-box sample.
struct NonSmoothSample : Error {
    using Error::Error;
};

// -- expression DSL ---------------------------------------------------------

struct SyntaxError : Error {
    SyntaxError(const std::string& msg, std::size_t pos)
        : Error(msg + " at position " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

struct UnknownIdentifier : SyntaxError {
    UnknownIdentifier(const std::string& name, std::size_t pos)
        : SyntaxError("unknown identifier '" + name + "'", pos) {}
};

struct NonIntegerExponent : SyntaxError {
    explicit NonIntegerExponent(std::size_t pos)
        : SyntaxError("exponent of '^' must be an integer literal", pos) {}
};

struct UnboundVariable : Error {
    using Error::Error;
};

struct SchemaError : Error {
    using Error::Error;
};

// -- geometry ---------------------------------------------------------------

struct NotCentered : Error {
    using Error::Error;
};

struct DegenerateFrame : Error {
    using Error::Error;
};

struct NotHChartChange : Error {
    using Error::Error;
};

struct NotHCompatible : Error {
    using Error::Error;
};

// -- flows ------------------------------------------------------------------

struct StepUnderflow : Error {
    using Error::Error;
};

struct NonFiniteState : Error {
    using Error::Error;
};

struct NotTangentToH : Error {
    using Error::Error;
};

struct FieldNotInH : Error {
    using Error::Error;
};

// -- exponential maps -------------------------------------------------------

struct GeodesicBlowup : Error {
    using Error::Error;
};

struct NotHPreserving : Error {
    using Error::Error;
};

struct InvalidHChartFamily : Error {
    using Error::Error;
};

/// Arrow coordinates outside the handle's domain box.
struct ArrowOutOfDomain : Error {
    using Error::Error;
};

struct NonpositiveScale : Error {
    using Error::Error;
};

struct SkewPartMismatch : Error {
    using Error::Error;
};

// -- groupoid ---------------------------------------------------------------

struct NewtonDivergence : Error {
    using Error::Error;
};

struct NotComposable : Error {
    using Error::Error;
};

}  // namespace osc
