#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "depord/dist_core.hpp"

namespace depord {

/// A convex phi on [-1, 1] with phi(0) = 0.
class PhiSpec {
 public:
  enum class Kind { Square, Abs, Power, PiecewiseLinear };

  static PhiSpec square();
  static PhiSpec abs();
  /// |t|^k, k >= 1.
  static PhiSpec power(double k);
  /// phi(t) = int_0^t slope(s) ds with slope = slopes[i] between breaks[i-1]
  /// and breaks[i] (slopes has one entry more than breaks). Slopes must be
  /// nondecreasing and breaks strictly increasing inside (-1, 1).
  static PhiSpec piecewise_linear(std::vector<double> breaks, std::vector<double> slopes);
  /// "square", "abs", "power:K" or "pl:b1;b2|s0;s1;s2".
  static PhiSpec parse(std::string_view text);

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  double operator()(double t) const;
  bool strictly_convex_at_zero() const;
  bool strictly_convex() const;
  std::string name() const;

 private:
  Kind kind_ = Kind::Square;
  double exponent_ = 2.0;
  std::vector<double> breaks_;
  std::vector<double> slopes_;
};

/// Chatterjee's xi of a finite model: sum_j p_j Var(P(Y >= a_j | cell)) over
/// sum_j p_j Var(1{Y >= a_j}). Throws DegenerateError for single-atom Y.
double chatterjee_xi(const ConditionalModel& m);

/// phi-divergence of the conditional from the unconditional distribution,
/// normalised to 1 at perfect dependence. Distribution functions are taken at
/// left limits, P(Y < y | X) - P(Y < y), which makes phi = square equal xi.
double xi_phi(const ConditionalModel& m, const PhiSpec& phi);

/// Sensitivity version: phi applied to differences of two independent cells.
double lambda_phi(const ConditionalModel& m, const PhiSpec& phi);

/// Integrated R^2: average of Var(P(Y <= y | X)) / Var(1{Y <= y}) over the Y law
/// restricted to all atoms except the largest.
double integrated_r2_nu(const ConditionalModel& m);

enum class RearrangedKind { SpearmanRho, KendallTau, GiniGamma };

/// Concordance measure of the reduced SI grid read as a checkerboard copula,
/// divided by the same quantity for a perfectly dependent model with the same
/// Y law. Requires equal Y probabilities (InputError otherwise).
double rearranged_measure(const ConditionalModel& m, RearrangedKind kind);

/// Unnormalised checkerboard value for a grid with equal Y probabilities.
double checkerboard_measure(const Eigen::VectorXd& u_breaks, const Eigen::MatrixXd& G, RearrangedKind kind);

}  // namespace depord
