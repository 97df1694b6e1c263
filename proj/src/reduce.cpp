#include "depord/reduce.hpp"

#include <algorithm>

#include "depord/rearrange.hpp"

namespace depord {
namespace {

constexpr double kBreakMerge = 1e-14;

// Piecewise-linear interpolation of cumulative values c at breaks b.
double interp(const Eigen::VectorXd& b, const Eigen::VectorXd& c, double u) {
  const auto* first = b.data();
  const auto* last = b.data() + b.size();
  auto pos = std::upper_bound(first, last, u) - first;
  if (pos <= 0) return c(0);
  if (pos >= b.size()) return c(c.size() - 1);
  const double t = (u - b(pos - 1)) / (b(pos) - b(pos - 1));
  return c(pos - 1) + t * (c(pos) - c(pos - 1));
}

// Compares H_a and H_b level by level; breaks/cums are per-grid u-breaks and
// cumulative sums (one row per interior level).
ComparisonResult compare_cumulative(const DiscreteMarginal& y, const Eigen::VectorXd& ba, const Eigen::MatrixXd& ha,
                                    const Eigen::VectorXd& bb, const Eigen::MatrixXd& hb, double tol) {
  ComparisonResult out;
  out.tol = tol;
  out.verdict = Verdict::Equal;
  const auto grid = union_breaks(ba, bb, kBreakMerge);
  struct Worst {
    double excess = -1.0;
    Witness w;
  } ab, ba_;
  for (Eigen::Index j = 0; j + 1 < y.size(); ++j) {
    const Eigen::VectorXd ca = ha.row(j).transpose();
    const Eigen::VectorXd cb = hb.row(j).transpose();
    double d1 = 0.0;
    double d2 = 0.0;
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
      const double u = grid(k);
      const double va = interp(ba, ca, u);
      const double vb = interp(bb, cb, u);
      const double level = y.cdf_values()(j);
      if (va - vb > d1) d1 = va - vb;
      if (vb - va > d2) d2 = vb - va;
      if (va - vb > ab.excess) ab = {va - vb, {level, u, va, vb}};
      if (vb - va > ba_.excess) ba_ = {vb - va, {level, u, vb, va}};
    }
    const auto v = verdict_from_excess(d1, d2, tol);
    out.per_level.push_back({y.cdf_values()(j), v, d1, d2});
    out.verdict = combine(out.verdict, v);
  }
  if (out.verdict == Verdict::Incomparable) {
    out.witness = ab.w;
    out.reverse_witness = ba_.w;
  }
  return out;
}

Eigen::MatrixXd cumulative_rows(const Eigen::VectorXd& widths, const Eigen::MatrixXd& g) {
  Eigen::MatrixXd h(g.rows(), g.cols() + 1);
  h.col(0).setZero();
  for (Eigen::Index k = 0; k < g.cols(); ++k) h.col(k + 1) = h.col(k) + widths(k) * g.col(k);
  return h;
}

Eigen::VectorXd breaks_of(const Eigen::VectorXd& widths) {
  Eigen::VectorXd b(widths.size() + 1);
  b(0) = 0.0;
  for (Eigen::Index k = 0; k < widths.size(); ++k) b(k + 1) = b(k) + widths(k);
  b(b.size() - 1) = 1.0;
  return b;
}

}  // namespace

Eigen::MatrixXd BivariateSIGrid::joint_cdf() const { return cumulative_rows(widths(), G); }

BivariateSIGrid reduce_to_si(const ConditionalModel& m) {
  std::vector<StepFunction> rows;
  rows.reserve(static_cast<std::size_t>(m.levels()));
  std::vector<double> all;
  for (Eigen::Index j = 0; j < m.levels(); ++j) {
    rows.push_back(decreasing_rearrangement(m.level_function(j)));
    const auto& b = rows.back().breaks();
    all.insert(all.end(), b.data(), b.data() + b.size());
  }
  std::sort(all.begin(), all.end());
  std::vector<double> merged;
  for (double u : all)
    if (merged.empty() || u - merged.back() > kBreakMerge) merged.push_back(u);
  merged.back() = 1.0;

  BivariateSIGrid g;
  g.y = m.y();
  g.u_breaks = Eigen::Map<const Eigen::VectorXd>(merged.data(), static_cast<Eigen::Index>(merged.size()));
  const auto cols = g.u_breaks.size() - 1;
  g.G.resize(m.levels(), cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    const double mid = 0.5 * (g.u_breaks(k) + g.u_breaks(k + 1));
    for (Eigen::Index j = 0; j < m.levels(); ++j) g.G(j, k) = rows[static_cast<std::size_t>(j)](mid);
  }
  g.G.row(m.levels() - 1).setOnes();
  return g;
}

Eigen::MatrixXd si_mass_matrix(const BivariateSIGrid& g) {
  Eigen::MatrixXd mass(g.G.rows(), g.G.cols());
  mass.row(0) = g.G.row(0);
  for (Eigen::Index j = 1; j < g.G.rows(); ++j) mass.row(j) = g.G.row(j) - g.G.row(j - 1);
  return mass * g.widths().asDiagonal();
}

bool verify_si(const BivariateSIGrid& g, double tol) {
  const auto m = g.G.rows();
  const auto n = g.G.cols();
  if (g.u_breaks.size() != n + 1 || g.y.size() != m || n == 0) return false;
  if (g.u_breaks(0) != 0.0 || std::abs(g.u_breaks(n) - 1.0) > tol) return false;
  for (Eigen::Index k = 0; k < n; ++k)
    if (!(g.u_breaks(k + 1) > g.u_breaks(k))) return false;
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (g.G(j, k) < -tol || g.G(j, k) > 1.0 + tol) return false;
      if (k > 0 && g.G(j, k) > g.G(j, k - 1) + tol) return false;
      if (j > 0 && g.G(j, k) < g.G(j - 1, k) - tol) return false;
    }
  }
  if ((g.G.row(m - 1).array() - 1.0).abs().maxCoeff() > tol) return false;
  const Eigen::VectorXd mix = g.G * g.widths();
  return (mix - g.y.cdf_values()).cwiseAbs().maxCoeff() <= tol;
}

ConditionalModel model_of(const BivariateSIGrid& g) { return {g.y, g.widths(), g.G}; }

ComparisonResult concordance_leq(const BivariateSIGrid& a, const BivariateSIGrid& b, double tol) {
  if (!marginal_constraint(a.y, b.y)) {
    ComparisonResult out;
    out.tol = tol;
    out.verdict = Verdict::MarginalMismatch;
    return out;
  }
  return compare_cumulative(a.y, a.u_breaks, a.joint_cdf(), b.u_breaks, b.joint_cdf(), tol);
}

ComparisonResult ccx_via_concordance(const ConditionalModel& a, const ConditionalModel& b, double tol) {
  if (!marginal_constraint(a.y(), b.y())) {
    ComparisonResult out;
    out.tol = tol;
    out.verdict = Verdict::MarginalMismatch;
    return out;
  }
  // Y rescaled to its cdf values, so both grids live on the same level set.
  return concordance_leq(reduce_to_si(y_to_cdf_values(a)), reduce_to_si(y_to_cdf_values(b)), tol);
}

bool is_si_ordered(const ConditionalModel& m, double tol) {
  const auto& f = m.cond_cdf();
  for (Eigen::Index i = 1; i < f.cols(); ++i)
    if ((f.col(i) - f.col(i - 1)).maxCoeff() > tol) return false;
  return true;
}

ComparisonResult raw_concordance(const ConditionalModel& a, const ConditionalModel& b, double tol) {
  if (!is_si_ordered(a, tol) || !is_si_ordered(b, tol)) throw InputError("raw concordance needs SI-ordered models");
  if (a.cells() != b.cells() || (a.cell_weights() - b.cell_weights()).cwiseAbs().maxCoeff() > kClosureTol)
    throw InputError("raw concordance needs identical cell weights");
  if (!marginal_constraint(a.y(), b.y())) {
    ComparisonResult out;
    out.tol = tol;
    out.verdict = Verdict::MarginalMismatch;
    return out;
  }
  const auto ba = breaks_of(a.cell_weights());
  const auto bb = breaks_of(b.cell_weights());
  // Joint cdf P(Y <= a_j, cell <= k) summed straight from the joint masses.
  const auto joint_cdf = [](const ConditionalModel& m) {
    const Eigen::MatrixXd mass = m.joint();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(mass.rows(), mass.cols() + 1);
    for (Eigen::Index j = 0; j < mass.rows(); ++j)
      for (Eigen::Index k = 0; k < mass.cols(); ++k)
        h(j, k + 1) = h(j, k) + (j > 0 ? h(j - 1, k + 1) - h(j - 1, k) : 0.0) + mass(j, k);
    return h;
  };
  return compare_cumulative(a.y(), ba, joint_cdf(a), bb, joint_cdf(b), tol);
}

}  // namespace depord
