#include "depord/ccx.hpp"

#include <algorithm>
#include <future>
#include <map>

#include "depord/rearrange.hpp"

namespace depord {
namespace {

void check_labels(std::span<const Eigen::Index> labels, Eigen::Index cells, Eigen::Index& groups) {
  if (static_cast<Eigen::Index>(labels.size()) != cells) throw InputError("one label per cell required");
  groups = 0;
  for (auto l : labels) {
    if (l < 0) throw InputError("cell labels must be nonnegative");
    groups = std::max(groups, l + 1);
  }
  std::vector<bool> used(static_cast<std::size_t>(groups), false);
  for (auto l : labels) used[static_cast<std::size_t>(l)] = true;
  if (std::find(used.begin(), used.end(), false) != used.end())
    throw InputError("cell labels must be dense (every index 0..L-1 used)");
}

}  // namespace

ComparisonResult ccx_compare(const ConditionalModel& a, const ConditionalModel& b, double tol, unsigned threads) {
  ComparisonResult out;
  out.tol = tol;
  if (!marginal_constraint(a.y(), b.y())) {
    out.verdict = Verdict::MarginalMismatch;
    return out;
  }
  const auto levels = a.levels() - 1;
  std::vector<SchurComparison> results(static_cast<std::size_t>(std::max<Eigen::Index>(levels, 0)));
  const auto run = [&](Eigen::Index begin, Eigen::Index end) {
    for (auto j = begin; j < end; ++j)
      results[static_cast<std::size_t>(j)] = schur_leq(a.level_function(j), b.level_function(j), tol);
  };
  if (threads <= 1 || levels < 2) {
    run(0, levels);
  } else {
    const auto workers = std::min<Eigen::Index>(threads, levels);
    std::vector<std::future<void>> jobs;
    for (Eigen::Index w = 0; w < workers; ++w)
      jobs.push_back(std::async(std::launch::async, run, levels * w / workers, levels * (w + 1) / workers));
    for (auto& job : jobs) job.get();
  }

  out.verdict = Verdict::Equal;
  Eigen::Index worst_ab = -1;
  Eigen::Index worst_ba = -1;
  for (Eigen::Index j = 0; j < levels; ++j) {
    const auto& r = results[static_cast<std::size_t>(j)];
    out.per_level.push_back({a.y().cdf_values()(j), r.verdict, r.max_f_over_g, r.max_g_over_f});
    out.verdict = combine(out.verdict, r.verdict);
    if (worst_ab < 0 || r.max_f_over_g > results[static_cast<std::size_t>(worst_ab)].max_f_over_g) worst_ab = j;
    if (worst_ba < 0 || r.max_g_over_f > results[static_cast<std::size_t>(worst_ba)].max_g_over_f) worst_ba = j;
  }
  if (out.verdict == Verdict::Incomparable) {
    const auto& rab = results[static_cast<std::size_t>(worst_ab)];
    const auto& rba = results[static_cast<std::size_t>(worst_ba)];
    out.witness = Witness{a.y().cdf_values()(worst_ab), rab.x_f_over_g,
                          integrated_rearrangement(a.level_function(worst_ab), rab.x_f_over_g),
                          integrated_rearrangement(b.level_function(worst_ab), rab.x_f_over_g)};
    out.reverse_witness = Witness{a.y().cdf_values()(worst_ba), rba.x_g_over_f,
                                  integrated_rearrangement(b.level_function(worst_ba), rba.x_g_over_f),
                                  integrated_rearrangement(a.level_function(worst_ba), rba.x_g_over_f)};
  }
  return out;
}

bool is_independent(const ConditionalModel& m, double tol) {
  for (Eigen::Index j = 0; j < m.levels(); ++j) {
    const auto row = m.cond_cdf().row(j);
    if (row.maxCoeff() - row.minCoeff() > tol) return false;
  }
  return true;
}

bool is_perfect(const ConditionalModel& m, double tol) {
  return m.cond_cdf().unaryExpr([tol](double f) { return std::min(f, 1.0 - f) <= tol ? 0.0 : 1.0; }).sum() == 0.0;
}

ConditionalModel merge_cells(const ConditionalModel& m, std::span<const Eigen::Index> labels) {
  Eigen::Index groups = 0;
  check_labels(labels, m.cells(), groups);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(groups);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(m.levels(), groups);
  for (Eigen::Index i = 0; i < m.cells(); ++i) {
    const auto g = labels[static_cast<std::size_t>(i)];
    w(g) += m.cell_weights()(i);
    mass.col(g) += m.cell_weights()(i) * m.cond_cdf().col(i);
  }
  Eigen::MatrixXd f = mass * w.cwiseInverse().asDiagonal();
  f = f.cwiseMin(1.0);
  f.row(f.rows() - 1).setOnes();
  return {m.y(), w / w.sum(), std::move(f)};
}

ConditionalModel marginalize_cells(const ConditionalModel& full, const ProductCells& cells, Factor keep) {
  const auto& idx = keep == Factor::X ? cells.x_index : cells.z_index;
  if (cells.x_index.size() != cells.z_index.size() || static_cast<Eigen::Index>(idx.size()) != full.cells())
    throw InputError("factor map must list (x, z) indices for every cell");
  // Densify the kept indices in increasing order.
  std::map<Eigen::Index, Eigen::Index> dense;
  for (auto v : idx) {
    if (v < 0) throw InputError("factor indices must be nonnegative");
    dense.emplace(v, 0);
  }
  Eigen::Index next = 0;
  for (auto& [key, val] : dense) val = next++;
  std::vector<Eigen::Index> labels;
  labels.reserve(idx.size());
  for (auto v : idx) labels.push_back(dense.at(v));
  return merge_cells(full, labels);
}

bool conditionally_independent(const ConditionalModel& full, const ProductCells& cells, double tol) {
  const auto reduced = marginalize_cells(full, cells, Factor::X);
  std::map<Eigen::Index, Eigen::Index> dense;
  for (auto v : cells.x_index) dense.emplace(v, 0);
  Eigen::Index next = 0;
  for (auto& [key, val] : dense) val = next++;
  for (Eigen::Index i = 0; i < full.cells(); ++i) {
    const auto col = dense.at(cells.x_index[static_cast<std::size_t>(i)]);
    if ((full.cond_cdf().col(i) - reduced.cond_cdf().col(col)).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

}  // namespace depord
