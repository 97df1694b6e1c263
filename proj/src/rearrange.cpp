#include "depord/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace depord {
namespace {

double eval_cumulative(const Eigen::VectorXd& breaks, const Eigen::VectorXd& cum,
                       const Eigen::VectorXd& values, double x) {
  const auto* first = breaks.data();
  const auto* last = first + breaks.size();
  auto k = std::upper_bound(first, last, x) - first - 1;
  k = std::clamp<Eigen::Index>(k, 0, values.size() - 1);
  return cum(k) + (x - breaks(k)) * values(k);
}

}  // namespace

StepFunction decreasing_rearrangement(const StepFunction& f) {
  const auto widths = f.widths();
  const auto& values = f.values();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values(a) > values(b); });

  std::vector<double> out_values;
  std::vector<double> out_widths;
  for (auto k : order) {
    if (!out_values.empty() && out_values.back() == values(k)) {
      out_widths.back() += widths(k);
    } else {
      out_values.push_back(values(k));
      out_widths.push_back(widths(k));
    }
  }
  return StepFunction::from_widths(Eigen::Map<const Eigen::VectorXd>(out_widths.data(), std::ssize(out_widths)),
                                   Eigen::Map<const Eigen::VectorXd>(out_values.data(), std::ssize(out_values)));
}

Eigen::VectorXd cumulative_integral(const StepFunction& f) {
  Eigen::VectorXd cum(f.breaks().size());
  cum(0) = 0.0;
  const auto widths = f.widths();
  for (Eigen::Index k = 0; k < f.pieces(); ++k) cum(k + 1) = cum(k) + widths(k) * f.values()(k);
  return cum;
}

double integrated_rearrangement(const StepFunction& f, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("integration bound must lie in [0, 1]");
  const auto star = decreasing_rearrangement(f);
  return eval_cumulative(star.breaks(), cumulative_integral(star), star.values(), x);
}

Eigen::VectorXd union_breaks(const Eigen::Ref<const Eigen::VectorXd>& a,
                             const Eigen::Ref<const Eigen::VectorXd>& b, double merge_tol) {
  std::vector<double> all(a.data(), a.data() + a.size());
  all.insert(all.end(), b.data(), b.data() + b.size());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double t : all)
    if (out.empty() || t - out.back() > merge_tol) out.push_back(t);
  out.front() = 0.0;
  out.back() = 1.0;
  return Eigen::Map<Eigen::VectorXd>(out.data(), std::ssize(out));
}

SchurComparison schur_leq(const StepFunction& f, const StepFunction& g, double tol) {
  SchurComparison out;
  if (std::abs(f.integral() - g.integral()) > tol) {
    out.verdict = Verdict::MarginalMismatch;
    return out;
  }
  const auto fs = decreasing_rearrangement(f);
  const auto gs = decreasing_rearrangement(g);
  const auto fcum = cumulative_integral(fs);
  const auto gcum = cumulative_integral(gs);
  const auto grid = union_breaks(fs.breaks(), gs.breaks());
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    const double x = grid(k);
    const double d = eval_cumulative(fs.breaks(), fcum, fs.values(), x) -
                     eval_cumulative(gs.breaks(), gcum, gs.values(), x);
    if (d > out.max_f_over_g) {
      out.max_f_over_g = d;
      out.x_f_over_g = x;
    }
    if (-d > out.max_g_over_f) {
      out.max_g_over_f = -d;
      out.x_g_over_f = x;
    }
  }
  out.verdict = verdict_from_excess(out.max_f_over_g, out.max_g_over_f, tol);
  return out;
}

}  // namespace depord
