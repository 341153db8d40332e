#pragma once

#include <stdexcept>
#include <string>

namespace threebody {

// Base class for every error raised by the engine. The CLI maps subclasses
// onto exit codes: scenario/format problems exit 4, everything else exits 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the real domain of a special function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Root iteration failed to converge within its budget.
class IterationError : public Error {
public:
    using Error::Error;
};

// A polar angle is requested for a zero-length position vector.
class DegenerateRadius : public Error {
public:
    using Error::Error;
};

// Barycenter of a pair whose combined mass is zero.
class ZeroMassPair : public Error {
public:
    using Error::Error;
};

// Surrogate energy constant B <= 0: the radial motion is not unbound, so the
// closed-form escape solution does not exist. `zero_radial_rate` flags the
// degenerate cause rdot_a0 = 0 under automatic sign selection.
class NonEscaping : public Error {
public:
    explicit NonEscaping(const std::string& what, bool zero_radial_rate_arg = false)
        : Error(what), zero_radial_rate(zero_radial_rate_arg) {}
    bool zero_radial_rate = false;
};

// Lambert argument left the real branch domain [-1/e, 0).
class BranchDomain : public Error {
public:
    using Error::Error;
};

// Adaptive quadrature exhausted its subdivision budget.
class QuadratureFailure : public Error {
public:
    using Error::Error;
};

// Separation margin r_a0 <= 2k already violated at the initial time.
class AlreadyInvalid : public Error {
public:
    using Error::Error;
};

// Two bodies at zero separation.
class CollisionSingularity : public Error {
public:
    using Error::Error;
};

// Two position vectors share the same polar angle; the printed force
// direction (difference of radial unit vectors) is undefined there.
class CollinearSingularity : public Error {
public:
    using Error::Error;
};

// Step-size control underflowed, typically near a singularity.
class StepFailure : public Error {
public:
    using Error::Error;
};

// Integration exceeded its step budget.
class MaxStepsExceeded : public Error {
public:
    using Error::Error;
};

// Two trajectories have no common time interval to compare over.
class DisjointIntervals : public Error {
public:
    using Error::Error;
};

// Scenario file is malformed: bad JSON, unknown keys, or invalid values.
class ScenarioFormatError : public Error {
public:
    using Error::Error;
};

}  // namespace threebody
