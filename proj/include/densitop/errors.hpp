#pragma once

#include <stdexcept>
#include <string>

namespace densitop {

/// Bad input: malformed problem file, violated ProblemSpec invariant, bad CLI override.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Singular/indefinite systems, non-finite gradients, infeasible subproblems.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace densitop
