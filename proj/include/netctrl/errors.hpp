#ifndef NETCTRL_ERRORS_HPP_
#define NETCTRL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace netctrl {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A matrix (or argument) violates a structural precondition:
/// negative entries, non-square shape, reducibility, missing
/// stochasticity, out-of-range control indices, and the like.
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& what) : Error(what) {}
};

/// An iterative solver exhausted its iteration budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, long iterations)
      : Error(what + " (iterations=" + std::to_string(iterations) + ")"),
        iterations_(iterations) {}
  long iterations() const { return iterations_; }

 private:
  long iterations_;
};

/// The Gramian is singular at the requested horizon, so no finite-energy
/// input reaches a general target state. Carries the offending lambda_min.
class SingularGramianError : public Error {
 public:
  SingularGramianError(const std::string& what, double lambda_min)
      : Error(what + " (lambda_min=" + std::to_string(lambda_min) + ")"),
        lambda_min_(lambda_min) {}
  double lambda_min() const { return lambda_min_; }

 private:
  double lambda_min_;
};

/// A brute-force computation was requested beyond its size/budget cap.
class SizeError : public Error {
 public:
  explicit SizeError(const std::string& what) : Error(what) {}
};

/// The spectrum is degenerate for the requested bound (sigma2 <= 0 or
/// the spectral gap has collapsed).
class DegenerateSpectrumError : public Error {
 public:
  explicit DegenerateSpectrumError(const std::string& what) : Error(what) {}
};

}  // namespace netctrl

#endif  // NETCTRL_ERRORS_HPP_
