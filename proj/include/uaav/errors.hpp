#pragma once

#include <stdexcept>
#include <string>

namespace uaav {

// Base class for every error raised by the library. Subclasses map
// one-to-one onto the failure modes of the model and the CLI front end.
class SimError : public std::runtime_error {
public:
  explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

// Attitude too close to the roll singularity of the angular-rate transform.
class SingularAttitude : public SimError {
public:
  explicit SingularAttitude(const std::string& msg) : SimError(msg) {}
};

// (alpha, beta) fell outside the domain of a loaded coefficient table.
class CoefficientOutOfRange : public SimError {
public:
  explicit CoefficientOutOfRange(const std::string& msg) : SimError(msg) {}
};

// Effective mass or inertia matrix is not positive definite.
class NonPositiveDefiniteMass : public SimError {
public:
  explicit NonPositiveDefiniteMass(const std::string& msg) : SimError(msg) {}
};

// Actuator command outside its configured limits.
class CommandOutOfRange : public SimError {
public:
  explicit CommandOutOfRange(const std::string& msg) : SimError(msg) {}
};

// Force trace too short for the requested period average.
class InsufficientTrace : public SimError {
public:
  explicit InsufficientTrace(const std::string& msg) : SimError(msg) {}
};

class UnknownPreset : public SimError {
public:
  explicit UnknownPreset(const std::string& msg) : SimError(msg) {}
};

// Pilot input outside [-1, 1].
class InputOutOfRange : public SimError {
public:
  explicit InputOutOfRange(const std::string& msg) : SimError(msg) {}
};

// Scenario schedule demanded a mode inconsistent with the current medium.
class IllegalTransition : public SimError {
public:
  explicit IllegalTransition(const std::string& msg) : SimError(msg) {}
};

// Actuator command type does not match the active control mode.
class ModeCommandMismatch : public SimError {
public:
  explicit ModeCommandMismatch(const std::string& msg) : SimError(msg) {}
};

// State norm exceeded the configured divergence bound during integration.
class NumericalDivergence : public SimError {
public:
  explicit NumericalDivergence(const std::string& msg) : SimError(msg) {}
};

class ConfigParseError : public SimError {
public:
  explicit ConfigParseError(const std::string& msg) : SimError(msg) {}
};

class IoError : public SimError {
public:
  explicit IoError(const std::string& msg) : SimError(msg) {}
};

}  // namespace uaav
