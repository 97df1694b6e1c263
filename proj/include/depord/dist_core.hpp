#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "depord/common.hpp"

namespace depord {

/// Univariate law with finitely many atoms a_1 < ... < a_m and positive masses.
///
/// The cumulative sums are cached at construction; the last one is pinned to
/// exactly 1 so that cdf(a_m) == 1 holds bitwise.
class DiscreteMarginal {
 public:
  DiscreteMarginal() = default;
  /// Throws InputError unless atoms are strictly increasing and probs are
  /// positive with sum 1 (within kProbSumTol).
  DiscreteMarginal(Eigen::VectorXd atoms, Eigen::VectorXd probs);

  /// Equal masses on the given atoms.
  static DiscreteMarginal uniform(Eigen::VectorXd atoms);
  static DiscreteMarginal point_mass(double atom);

  const Eigen::VectorXd& atoms() const { return atoms_; }
  const Eigen::VectorXd& probs() const { return probs_; }
  /// cdf values at the atoms, cdf_values()(size()-1) == 1.
  const Eigen::VectorXd& cdf_values() const { return cdf_; }
  Eigen::Index size() const { return atoms_.size(); }
  bool degenerate() const { return atoms_.size() == 1; }

  /// Right-continuous distribution function.
  double cdf(double y) const;
  /// Left limit P(Y < y).
  double cdf_left(double y) const;
  /// Index j of min{a_j : cdf(a_j) >= v}; v must lie in (0, 1).
  Eigen::Index quantile_index(double v) const;

 private:
  Eigen::VectorXd atoms_;
  Eigen::VectorXd probs_;
  Eigen::VectorXd cdf_;
};

/// Left-continuous generalized inverse q(v) = min{a_j : F(a_j) >= v}.
/// Throws std::domain_error for v outside (0, 1).
double quantile(const DiscreteMarginal& m, double v);

/// {0} together with all cdf values: the closure of Ran(F) for a discrete law.
std::vector<double> range_closure(const DiscreteMarginal& m);

/// True iff both laws have the same closure of Ran(F) (elementwise within tol).
bool marginal_constraint(const DiscreteMarginal& a, const DiscreteMarginal& b,
                         double tol = kClosureTol);

/// Right-open step function on (0, 1]: values(k) on (breaks(k), breaks(k+1)].
class StepFunction {
 public:
  StepFunction() = default;
  /// breaks must satisfy 0 = t_0 < ... < t_K = 1 and values.size() == K.
  StepFunction(Eigen::VectorXd breaks, Eigen::VectorXd values);

  /// Piecewise-constant function with the given cell widths (summing to 1).
  static StepFunction from_widths(const Eigen::Ref<const Eigen::VectorXd>& widths,
                                  const Eigen::Ref<const Eigen::VectorXd>& values);
  static StepFunction constant(double c);

  const Eigen::VectorXd& breaks() const { return breaks_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index pieces() const { return values_.size(); }
  Eigen::VectorXd widths() const;

  double integral() const;
  /// Value on the piece containing u in (0, 1] (u = 0 maps to the first piece).
  double operator()(double u) const;

 private:
  Eigen::VectorXd breaks_;
  Eigen::VectorXd values_;
};

/// Finite representation of (Y, X): predictor cells with weights and the
/// conditional cdf matrix F(j, i) = P(Y <= a_j | cell i).
class ConditionalModel {
 public:
  ConditionalModel() = default;
  /// Validates shape, column monotonicity, F(m-1, i) == 1, entries in [0,1]
  /// and the marginal-consistency invariant; throws InputError on failure.
  ConditionalModel(DiscreteMarginal y, Eigen::VectorXd cell_weights, Eigen::MatrixXd cond_cdf);

  /// Builds the model from a joint mass matrix P(Y = a_j, cell = i).
  static ConditionalModel from_joint(const Eigen::Ref<const Eigen::VectorXd>& y_atoms,
                                     const Eigen::Ref<const Eigen::MatrixXd>& joint);
  /// Y independent of a single cell.
  static ConditionalModel independent(const DiscreteMarginal& y);

  const DiscreteMarginal& y() const { return y_; }
  const Eigen::VectorXd& cell_weights() const { return weights_; }
  const Eigen::MatrixXd& cond_cdf() const { return cdf_; }
  Eigen::Index levels() const { return cdf_.rows(); }
  Eigen::Index cells() const { return cdf_.cols(); }

  /// Joint mass matrix P(Y = a_j, cell = i).
  Eigen::MatrixXd joint() const;
  /// Row j of the conditional cdf as a step function over the cell widths.
  StepFunction level_function(Eigen::Index j) const;

 private:
  DiscreteMarginal y_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXd cdf_;
};

/// Strictly increasing relabeling of the Y atoms (Axiom O7 checks).
ConditionalModel relabel_y(const ConditionalModel& m, const Eigen::Ref<const Eigen::VectorXd>& new_atoms);
/// Replaces Y atoms by their cdf values (Axiom O8).
ConditionalModel y_to_cdf_values(const ConditionalModel& m);
/// Reorders cells: result cell k is source cell perm[k].
ConditionalModel permute_cells(const ConditionalModel& m, std::span<const Eigen::Index> perm);

// ---------------------------------------------------------------------------
// Data ingestion

struct SampleRow {
  double y = 0.0;
  std::vector<double> x;
};

struct SampleOptions {
  int n_cells = 10;
  /// More distinct y values than this are quantile-binned to max_atoms atoms.
  int max_atoms = 200;
};

/// Empirical checkerboard estimator. Cells come from iterated coordinatewise
/// rank binning of x; tied x values always share a cell.
ConditionalModel from_samples(std::span<const SampleRow> rows, const SampleOptions& opts);

/// Reads "y,x1,...,xp" CSV with a header row. Missing or non-numeric fields
/// are rejected with InputError naming the line.
std::vector<SampleRow> read_samples_csv(std::istream& in);

}  // namespace depord
