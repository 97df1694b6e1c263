#pragma once

#include "depord/dist_core.hpp"
#include "depord/verdict.hpp"

namespace depord {

/// Bivariate SI distribution on a u-partition of (0,1] times the Y atoms.
/// G(j, k) = P(V <= a_j | U in (u_{k-1}, u_k]); rows nonincreasing in k.
struct BivariateSIGrid {
  Eigen::VectorXd u_breaks;
  DiscreteMarginal y;
  Eigen::MatrixXd G;

  Eigen::VectorXd widths() const { return u_breaks.tail(G.cols()) - u_breaks.head(G.cols()); }
  /// H(u_k, a_j) at every break (column 0 is u = 0).
  Eigen::MatrixXd joint_cdf() const;
};

/// Rearranges every Y-row of the conditional cdf decreasingly over the
/// weighted cells and refines to the union of their breakpoints.
BivariateSIGrid reduce_to_si(const ConditionalModel& m);

/// Point masses of the grid: mass(j, k) = width_k * (G(j, k) - G(j-1, k)).
Eigen::MatrixXd si_mass_matrix(const BivariateSIGrid& g);

/// Rows nonincreasing in k, columns nondecreasing in j with last row 1, and the
/// u-mixture reproduces the Y cdf; all within tol.
bool verify_si(const BivariateSIGrid& g, double tol = kDefaultTol);

/// The grid read as a model with u-intervals for cells.
ConditionalModel model_of(const BivariateSIGrid& g);

/// Lower-orthant comparison of the joint cdfs H at the union of u-breaks and the
/// shared interior levels. Both H are piecewise linear in u, so this is exact.
ComparisonResult concordance_leq(const BivariateSIGrid& a, const BivariateSIGrid& b, double tol = kDefaultTol);

/// ccx decided through the concordance order of the reduced grids.
ComparisonResult ccx_via_concordance(const ConditionalModel& a, const ConditionalModel& b,
                                     double tol = kDefaultTol);

/// True iff the conditional cdf is nonincreasing across cells in their given
/// order, i.e. the model is already SI with cells as the predictor scale.
bool is_si_ordered(const ConditionalModel& m, double tol = kDefaultTol);

/// Raw concordance comparison of two models that are already SI in cell order
/// and share their cell weights: P(Y <= a_j, cell <= k) is compared directly,
/// with no rearrangement. Throws InputError if either precondition fails.
ComparisonResult raw_concordance(const ConditionalModel& a, const ConditionalModel& b, double tol = kDefaultTol);

}  // namespace depord
