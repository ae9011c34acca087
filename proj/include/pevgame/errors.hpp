#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pevgame {

/// Malformed or out-of-range input (bad file, invariant violation, size mismatch).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The projection solver hit its iteration cap. Carries the last iterate.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, std::vector<double> last_iterate,
                 double residual, int iterations)
      : std::runtime_error(what),
        last_iterate_(std::move(last_iterate)),
        residual_(residual),
        iterations_(iterations) {}

  const std::vector<double>& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  std::vector<double> last_iterate_;
  double residual_;
  int iterations_;
};

/// Two routes that must agree did not (e.g. re-solved followers vs closed form),
/// or an assumption the solver relies on was violated.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Empty intersection in a projection subproblem.
class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace pevgame

namespace pevgame {

/// No group has positive demand where one is required (e.g. reading off a price).
class DegenerateScenario : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace pevgame
