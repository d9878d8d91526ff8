// errors.hpp: exception types raised by the cavityent library

#pragma once

#include <stdexcept>
#include <string>

namespace cavityent {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation, e.g. a negative time.
class DomainError : public Error {
public:
    using Error::Error;
};

// Closed form exists only in a narrower regime than the one requested.
class UnsupportedRegimeError : public Error {
public:
    using Error::Error;
};

// Oracle grid too coarse for the requested accuracy.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Horizon longer than the recurrence time of a discretized bath.
class AliasingError : public Error {
public:
    using Error::Error;
};

// Root finder could not bracket a solution.
class SolverError : public Error {
public:
    using Error::Error;
};

class HorizonError : public SolverError {
public:
    using SolverError::SolverError;
};

// Projective measurement onto an outcome with vanishing probability.
class MeasurementError : public Error {
public:
    using Error::Error;
};

// State has amplitude outside the five-component manifold reachable by the model.
class StructureError : public Error {
public:
    using Error::Error;
};

} // namespace cavityent
