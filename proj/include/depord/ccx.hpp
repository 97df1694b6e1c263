#pragma once

#include <span>
#include <vector>

#include "depord/dist_core.hpp"
#include "depord/verdict.hpp"

namespace depord {

/// Decides (Y, X) <=ccx (Y', X') through the Schur order of the level
/// functions eta^v (one per interior closure value v of Ran F_Y).
///
/// Levels are matched by closure value, so Y and Y' may live on different
/// atoms as long as the closures of their cdf ranges agree; otherwise the
/// verdict is MarginalMismatch. A degenerate Y has no interior level and
/// compares Equal to any other degenerate Y.
///
/// `threads` > 1 spreads levels over worker threads; the aggregation order is
/// fixed, so the result does not depend on the thread count.
ComparisonResult ccx_compare(const ConditionalModel& a, const ConditionalModel& b,
                             double tol = kDefaultTol, unsigned threads = 1);

/// Every row of the conditional cdf is constant across cells (within tol).
bool is_independent(const ConditionalModel& m, double tol = kDefaultTol);
/// Every conditional cdf entry is within tol of 0 or 1, i.e. Y = f(cell).
bool is_perfect(const ConditionalModel& m, double tol = kDefaultTol);

/// Merges cells by label (labels[i] = new index of cell i, dense 0..L-1):
/// the model of (Y, h(X)) for a function h of the cells.
ConditionalModel merge_cells(const ConditionalModel& m, std::span<const Eigen::Index> labels);

/// Cells of a model over a product predictor (X, Z): cell i is the pair
/// (x_index[i], z_index[i]).
struct ProductCells {
  std::vector<Eigen::Index> x_index;
  std::vector<Eigen::Index> z_index;
};

enum class Factor { X, Z };

/// The model of (Y, X) (keep = X) or (Y, Z) (keep = Z) obtained from a model of
/// (Y, (X, Z)) by mixing the columns that share the kept index.
ConditionalModel marginalize_cells(const ConditionalModel& full, const ProductCells& cells, Factor keep);

/// F_{Y|X,Z} == F_{Y|X} cellwise (entries within tol), i.e. Y and Z are
/// conditionally independent given X.
bool conditionally_independent(const ConditionalModel& full, const ProductCells& cells,
                               double tol = kConsistencyTol);

}  // namespace depord
