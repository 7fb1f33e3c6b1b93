#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace striplab {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSpec : public Error {
 public:
  explicit InvalidSpec(const std::string& reason) : Error("invalid set description: " + reason) {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::size_t required, std::size_t cap)
      : Error("sample budget exceeded: " + std::to_string(required) + " > " + std::to_string(cap)),
        required_samples(required),
        sample_cap(cap) {}
  std::size_t required_samples;
  std::size_t sample_cap;
};

class ResolutionExhausted : public Error {
 public:
  using Error::Error;
};

class DegreeZero : public Error {
 public:
  DegreeZero() : Error("root finding requested for a constant polynomial") {}
};

class NoConvergence : public Error {
 public:
  explicit NoConvergence(int sweeps)
      : Error("root iteration did not converge after " + std::to_string(sweeps) + " sweeps"),
        iterations(sweeps) {}
  int iterations;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  explicit RankDeficient(int degree)
      : Error("orthogonal basis collapsed at degree " + std::to_string(degree)), at_degree(degree) {}
  int at_degree;
};

class InsufficientSamples : public Error {
 public:
  InsufficientSamples(std::size_t have, std::size_t need)
      : Error("need " + std::to_string(need) + " samples, have " + std::to_string(have)) {}
};

class TargetMismatch : public Error {
 public:
  using Error::Error;
};

class PoleAtOne : public Error {
 public:
  PoleAtOne() : Error("zeta evaluated at its pole s = 1") {}
};

class PrecisionExhausted : public Error {
 public:
  PrecisionExhausted(double estimate, std::size_t grid_index = 0)
      : Error("zeta error estimate " + std::to_string(estimate) + " above 1e-6"),
        error_estimate(estimate),
        index(grid_index) {}
  double error_estimate;
  std::size_t index;
};

class BudgetInfeasible : public Error {
 public:
  explicit BudgetInfeasible(double delta)
      : Error("repair budget infeasible, required root displacement " + std::to_string(delta)),
        required_delta(delta) {}
  double required_delta;
};

class RootFindingFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace striplab
