#pragma once

#include <stdexcept>
#include <string>

namespace adjrobust {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A domain invariant failed; what() names the invariant.
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& invariant)
      : Error("invariant violated: " + invariant), invariant_(invariant) {}
  const std::string& invariant() const { return invariant_; }

 private:
  std::string invariant_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A polyhedron that must be bounded is not.
class UnboundedSetError : public Error {
 public:
  using Error::Error;
};

class CapExceededError : public Error {
 public:
  using Error::Error;
};

// A closed-form bound was asked for outside the range where it holds.
class RegimeError : public Error {
 public:
  using Error::Error;
};

// An LP/MIP solve did not produce a usable answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

// A solve stopped at a node or time limit before proving its answer.
class LimitReached : public SolverError {
 public:
  using SolverError::SolverError;
};

// The cutting-plane loop stopped without closing; the optimum lies in
// [lower, upper].
class CuttingPlaneStall : public SolverError {
 public:
  CuttingPlaneStall(const std::string& what, double lower, double upper)
      : SolverError(what), lower_(lower), upper_(upper) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

}  // namespace adjrobust
