#pragma once

#include "depord/dist_core.hpp"
#include "depord/verdict.hpp"

namespace depord {

/// A finite law given by (possibly repeated) values and positive weights.
struct WeightedLaw {
  Eigen::VectorXd values;
  Eigen::VectorXd weights;
};

/// S <=cx T by stop-loss transforms: equal means and E(S-t)+ <= E(T-t)+ at every
/// atom t of either law (the transforms are piecewise linear between atoms).
bool convex_order_bruteforce(const WeightedLaw& s, const WeightedLaw& t, double tol = kProbSumTol);

/// ccx straight from the definition: for each shared closure interval, the law
/// of P(Y >= q_Y(v) | cell) under the cell weights, compared in convex order
/// both ways.
ComparisonResult ccx_bruteforce(const ConditionalModel& a, const ConditionalModel& b, double tol = kDefaultTol);

/// xi as alpha * E_{X x Y}[P(Y >= y | X)^2] - beta (product-measure form).
double xi_bruteforce(const ConditionalModel& m);

}  // namespace depord
