#pragma once

#include <stdexcept>
#include <string>

namespace depord {

/// Default comparison tolerance used throughout the library and the CLI.
inline constexpr double kDefaultTol = 1e-9;
/// Tolerance for checking that probabilities sum to one.
inline constexpr double kProbSumTol = 1e-12;
/// Tolerance for the marginal-consistency invariant of a ConditionalModel.
inline constexpr double kConsistencyTol = 1e-10;
/// Tolerance for matching closure values of Ran(F_Y) between two laws.
inline constexpr double kClosureTol = 1e-12;

/// Malformed or inconsistent input (schema violations, broken invariants).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A quantity is undefined for the given input (degenerate Y, zero normaliser).
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Relative tolerance with absolute floor: |a - b| <= max(abs_floor, rel * max(|a|, |b|)).
bool nearly_equal(double a, double b, double rel = 1e-9, double abs_floor = 1e-12);

}  // namespace depord
