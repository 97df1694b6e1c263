#pragma once

#include <Eigen/Dense>

#include "depord/dist_core.hpp"
#include "depord/verdict.hpp"

namespace depord {

/// Decreasing rearrangement f*: pieces sorted by value (descending), ties kept
/// in their original order. Adjacent equal values are merged.
StepFunction decreasing_rearrangement(const StepFunction& f);

/// Cumulative integral of a step function at its own breakpoints:
/// out(k) = int_0^{breaks(k)} f, out(0) = 0.
Eigen::VectorXd cumulative_integral(const StepFunction& f);

/// int_0^x f*(t) dt, evaluated exactly (piecewise linear in x).
/// Throws std::domain_error for x outside [0, 1].
double integrated_rearrangement(const StepFunction& f, double x);

/// Sorted union of two breakpoint sets; points closer than `merge_tol` collapse.
Eigen::VectorXd union_breaks(const Eigen::Ref<const Eigen::VectorXd>& a,
                             const Eigen::Ref<const Eigen::VectorXd>& b, double merge_tol = 1e-14);

/// Result of comparing two functions in the Schur order.
struct SchurComparison {
  Verdict verdict = Verdict::Equal;
  /// Largest value of int_0^x f* - int_0^x g* and where it occurs.
  double max_f_over_g = 0.0;
  double x_f_over_g = 0.0;
  /// Largest value of int_0^x g* - int_0^x f* and where it occurs.
  double max_g_over_f = 0.0;
  double x_g_over_f = 0.0;
};

/// f <_S g iff int_0^x f* <= int_0^x g* for all x and the totals agree.
/// The integrated rearrangements are piecewise linear, so checking the union
/// of breakpoints is exact.
SchurComparison schur_leq(const StepFunction& f, const StepFunction& g, double tol = kDefaultTol);

}  // namespace depord
