#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skewprod {

// Base for everything thrown by this library. Where it makes sense the
// throwing site records which path and which step went wrong so a failed
// batch run can name the offender.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input (flags, config files, out-of-range numerics).
class ConfigError : public Error {
public:
    using Error::Error;
};

class UnknownScenario : public ConfigError {
public:
    explicit UnknownScenario(const std::string& name)
        : ConfigError("unknown scenario: " + name) {}
};

class InvalidNumeric : public ConfigError {
public:
    InvalidNumeric(const std::string& key, const std::string& detail)
        : ConfigError("invalid value for '" + key + "': " + detail) {}
};

// Something went wrong while integrating or transforming a path.
class SimulationError : public Error {
public:
    SimulationError(const std::string& msg, std::size_t path, std::size_t step)
        : Error(msg + " (path " + std::to_string(path) + ", step " +
                std::to_string(step) + ")"),
          path_index(path),
          step_index(step) {}
    explicit SimulationError(const std::string& msg)
        : Error(msg), path_index(0), step_index(0) {}
    std::size_t path_index;
    std::size_t step_index;
};

class NonFinite : public SimulationError {
public:
    using SimulationError::SimulationError;
};

class OriginStart : public SimulationError {
public:
    OriginStart() : SimulationError("start point is the origin") {}
};

class NonPositiveDeterminantStart : public SimulationError {
public:
    NonPositiveDeterminantStart()
        : SimulationError("start matrix must have positive determinant") {}
};

class DeterminantCrossedZero : public SimulationError {
public:
    using SimulationError::SimulationError;
};

class OriginHit : public SimulationError {
public:
    using SimulationError::SimulationError;
};

// A raw angle step of |d| >= pi cannot be unwrapped unambiguously; the grid
// is too coarse for the path in question.
class UnwrapJump : public SimulationError {
public:
    using SimulationError::SimulationError;
};

class NonPositiveDeterminant : public SimulationError {
public:
    using SimulationError::SimulationError;
    NonPositiveDeterminant() : SimulationError("matrix determinant is not positive") {}
};

class DegenerateColumn : public SimulationError {
public:
    DegenerateColumn() : SimulationError("first column is zero; QR factor undefined") {}
    using SimulationError::SimulationError;
};

class NonPositiveDiagonal : public SimulationError {
public:
    using SimulationError::SimulationError;
    NonPositiveDiagonal() : SimulationError("triangular factor needs a positive diagonal") {}
};

// The clock barely moves over a long stretch, so inverting it is ill posed.
class FlatClock : public SimulationError {
public:
    using SimulationError::SimulationError;
};

class GridMismatch : public Error {
public:
    using Error::Error;
    GridMismatch() : Error("paths live on different grids") {}
};

class TooFewPaths : public Error {
public:
    explicit TooFewPaths(std::size_t got, std::size_t need)
        : Error("need at least " + std::to_string(need) + " paths, got " +
                std::to_string(got)) {}
};

class TooFewSamples : public Error {
public:
    explicit TooFewSamples(std::size_t got, std::size_t need)
        : Error("need at least " + std::to_string(need) + " samples, got " +
                std::to_string(got)) {}
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace skewprod
