#include "depord/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace depord {
namespace {

double stop_loss(const WeightedLaw& law, double t) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < law.values.size(); ++i) acc += law.weights(i) * std::max(law.values(i) - t, 0.0);
  return acc;
}

}  // namespace

bool convex_order_bruteforce(const WeightedLaw& s, const WeightedLaw& t, double tol) {
  if (std::abs(s.weights.dot(s.values) - t.weights.dot(t.values)) > tol) return false;
  for (const auto* law : {&s, &t})
    for (Eigen::Index i = 0; i < law->values.size(); ++i) {
      const double x = law->values(i);
      if (stop_loss(s, x) > stop_loss(t, x) + tol) return false;
    }
  return true;
}

ComparisonResult ccx_bruteforce(const ConditionalModel& a, const ConditionalModel& b, double tol) {
  ComparisonResult out;
  out.tol = tol;
  if (!marginal_constraint(a.y(), b.y())) {
    out.verdict = Verdict::MarginalMismatch;
    return out;
  }
  out.verdict = Verdict::Equal;
  const auto closure = range_closure(a.y());
  const auto survival = [](const ConditionalModel& m, double v) {
    const auto j = m.y().quantile_index(v);
    WeightedLaw law{Eigen::VectorXd::Ones(m.cells()), m.cell_weights()};
    if (j > 0) law.values = (1.0 - m.cond_cdf().row(j - 1).array()).transpose();
    return law;
  };
  for (std::size_t k = 1; k + 1 < closure.size(); ++k) {
    // v in the open interval (c_k, c_{k+1}) selects the survival row at level c_k.
    const double v = 0.5 * (closure[k] + closure[k + 1]);
    const auto sa = survival(a, v);
    const auto sb = survival(b, v);
    const bool leq = convex_order_bruteforce(sa, sb, tol);
    const bool geq = convex_order_bruteforce(sb, sa, tol);
    const Verdict verdict = leq && geq ? Verdict::Equal
                            : leq      ? Verdict::LessEq
                            : geq      ? Verdict::GreaterEq
                                       : Verdict::Incomparable;
    out.per_level.push_back({closure[k], verdict, 0.0, 0.0});
    out.verdict = combine(out.verdict, verdict);
  }
  return out;
}

double xi_bruteforce(const ConditionalModel& m) {
  if (m.y().degenerate()) throw DegenerateError("xi undefined for degenerate Y");
  const auto& p = m.y().probs();
  const auto& w = m.cell_weights();
  double second = 0.0;
  double beta = 0.0;
  double den = 0.0;
  for (Eigen::Index j = 0; j < m.levels(); ++j) {
    const double s = j == 0 ? 1.0 : 1.0 - m.y().cdf_values()(j - 1);
    for (Eigen::Index i = 0; i < m.cells(); ++i) {
      const double si = j == 0 ? 1.0 : 1.0 - m.cond_cdf()(j - 1, i);
      second += p(j) * w(i) * si * si;
    }
    beta += p(j) * s * s;
    den += p(j) * s * (1.0 - s);
  }
  return (second - beta) / den;
}

}  // namespace depord
