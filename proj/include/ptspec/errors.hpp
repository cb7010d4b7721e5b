#pragma once

#include <stdexcept>
#include <string>

namespace ptspec {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid problem data (bad degree, wrong coefficient count, non-finite input).
class InvalidSpecError : public Error {
public:
  using Error::Error;
};

// Requested series order exceeds the internal truncation cap.
class CapacityError : public Error {
public:
  using Error::Error;
};

// Fractional power requested on the principal-branch cut (z <= 0).
class BranchCutError : public Error {
public:
  using Error::Error;
};

// Divergent quantity requested (e.g. K for m = 2).
class DivergenceError : public Error {
public:
  using Error::Error;
};

// Seed point outside the sector where the asymptotic expansion is valid.
class SectorError : public Error {
public:
  using Error::Error;
};

// Seed radius too small for a trustworthy asymptotic seed.
class SeedRadiusError : public Error {
public:
  using Error::Error;
};

// Adaptive step size underflowed; carries the |z| where stepping failed.
class StiffnessError : public Error {
public:
  StiffnessError(const std::string& what, double abs_z)
      : Error(what), abs_z_(abs_z) {}
  double abs_z() const { return abs_z_; }

private:
  double abs_z_;
};

class MaxStepsError : public Error {
public:
  using Error::Error;
};

// A Wronskian that is nonzero in exact arithmetic fell below the noise
// floor; signals a numerics failure, not mathematics.
class DegenerateWronskianError : public Error {
public:
  using Error::Error;
};

// Both evaluation forms of the eigencondition degenerated at once.
class EvaluationError : public Error {
public:
  using Error::Error;
};

// Root refinement failed to converge.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

// Evaluation requested exactly at a pole.
class PoleError : public Error {
public:
  using Error::Error;
};

}  // namespace ptspec
