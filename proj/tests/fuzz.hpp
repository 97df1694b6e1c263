#pragma once
// Random model generators shared by the unit and acceptance tests.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "depord/ccx.hpp"
#include "depord/dist_core.hpp"
#include "depord/reduce.hpp"

namespace fuzz {

using Rng = std::mt19937_64;
using depord::ConditionalModel;
using depord::DiscreteMarginal;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int integer(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Positive weights summing to 1, bounded away from 0.
inline VectorXd simplex(Rng& rng, Index n) {
  VectorXd w(n);
  for (Index i = 0; i < n; ++i) w(i) = 0.05 + uniform(rng);
  return w / w.sum();
}

inline VectorXd sorted_atoms(Rng& rng, Index m) {
  VectorXd a(m);
  double x = uniform(rng, -3.0, 0.0);
  for (Index j = 0; j < m; ++j) a(j) = x += 0.1 + uniform(rng);
  return a;
}

inline DiscreteMarginal random_marginal(Rng& rng, Index m, bool equal_probs = false) {
  const auto atoms = sorted_atoms(rng, m);
  if (equal_probs) return DiscreteMarginal::uniform(atoms);
  return {atoms, simplex(rng, m)};
}

/// North-west corner coupling of p and w after shuffling both index sets.
inline MatrixXd nw_coupling(Rng& rng, const VectorXd& p, const VectorXd& w) {
  std::vector<Index> rows(static_cast<std::size_t>(p.size())), cols(static_cast<std::size_t>(w.size()));
  std::iota(rows.begin(), rows.end(), Index{0});
  std::iota(cols.begin(), cols.end(), Index{0});
  std::shuffle(rows.begin(), rows.end(), rng);
  std::shuffle(cols.begin(), cols.end(), rng);
  MatrixXd j = MatrixXd::Zero(p.size(), w.size());
  VectorXd pr = p, wr = w;
  std::size_t r = 0, c = 0;
  while (r < rows.size() && c < cols.size()) {
    const double take = std::min(pr(rows[r]), wr(cols[c]));
    j(rows[r], cols[c]) += take;
    pr(rows[r]) -= take;
    wr(cols[c]) -= take;
    if (pr(rows[r]) <= wr(cols[c])) ++r; else ++c;
  }
  return j;
}

/// Model with prescribed Y law: a random mixture of shuffled NW-corner
/// couplings and the product coupling.
inline ConditionalModel random_model(Rng& rng, const DiscreteMarginal& y, Index cells) {
  const VectorXd w = simplex(rng, cells);
  const int parts = integer(rng, 1, 3);
  VectorXd lambda = simplex(rng, parts + 1);
  if (uniform(rng) < 0.2) lambda(parts) = 0.0;  // sometimes no product component
  lambda /= lambda.sum();
  MatrixXd joint = lambda(parts) * (y.probs() * w.transpose());
  for (int k = 0; k < parts; ++k) joint += lambda(k) * nw_coupling(rng, y.probs(), w);
  // Mixture of couplings of (p, w): conditional cdfs straight from the joint.
  MatrixXd cdf(joint.rows(), joint.cols());
  for (Index i = 0; i < cells; ++i) {
    double acc = 0.0;
    for (Index j = 0; j < joint.rows(); ++j) cdf(j, i) = std::min(1.0, (acc += joint(j, i)) / w(i));
    cdf(joint.rows() - 1, i) = 1.0;
  }
  return {y, w, cdf};
}

inline ConditionalModel random_model(Rng& rng, Index levels, Index cells, bool equal_probs = false) {
  return random_model(rng, random_marginal(rng, levels, equal_probs), cells);
}

inline ConditionalModel perfect_model(const DiscreteMarginal& y) {
  const auto m = y.size();
  MatrixXd f(m, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < m; ++i) f(j, i) = i <= j ? 1.0 : 0.0;
  return {y, y.probs(), f};
}

/// Random surjective labelling of `cells` onto `groups` labels.
inline std::vector<Index> random_labels(Rng& rng, Index cells, Index groups) {
  std::vector<Index> labels(static_cast<std::size_t>(cells));
  for (Index i = 0; i < cells; ++i) labels[static_cast<std::size_t>(i)] = i < groups ? i : integer(rng, 0, static_cast<int>(groups - 1));
  std::shuffle(labels.begin(), labels.end(), rng);
  return labels;
}

/// (Y, K(X)) for a random Markov kernel K from cells to `out` new cells.
inline ConditionalModel garble(Rng& rng, const ConditionalModel& m, Index out) {
  MatrixXd k(m.cells(), out);
  for (Index i = 0; i < m.cells(); ++i) k.row(i) = simplex(rng, out).transpose();
  const MatrixXd joint = m.joint() * k;
  const VectorXd w = joint.colwise().sum().transpose();
  MatrixXd cdf(joint.rows(), out);
  for (Index c = 0; c < out; ++c) {
    double acc = 0.0;
    for (Index j = 0; j < joint.rows(); ++j) cdf(j, c) = std::min(1.0, (acc += joint(j, c)) / w(c));
    cdf(joint.rows() - 1, c) = 1.0;
  }
  return {m.y(), w / w.sum(), cdf};
}

inline std::vector<Index> random_permutation(Rng& rng, Index n) {
  std::vector<Index> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), Index{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Model over product cells (x, z); conditionally independent of z given x when `ci`.
struct ProductModel {
  ConditionalModel model;
  depord::ProductCells cells;
};

inline ProductModel random_product_model(Rng& rng, const DiscreteMarginal& y, Index nx, Index nz, bool ci) {
  const VectorXd pxz = simplex(rng, nx * nz);
  ProductModel out;
  MatrixXd cdf(y.size(), nx * nz);
  // Each (x, z) cell's conditional law of Y is drawn around a shared x-law.
  std::vector<ConditionalModel> base;
  for (Index x = 0; x < nx; ++x) base.push_back(random_model(rng, y, 2));
  VectorXd w(nx * nz);
  for (Index x = 0; x < nx; ++x)
    for (Index z = 0; z < nz; ++z) {
      const Index c = x * nz + z;
      out.cells.x_index.push_back(x);
      out.cells.z_index.push_back(z);
      w(c) = pxz(c);
      const Index pick = ci ? 0 : static_cast<Index>(z % 2);
      cdf.col(c) = base[static_cast<std::size_t>(x)].cond_cdf().col(pick);
      if (!ci && z >= 2) {
        const double t = uniform(rng);
        cdf.col(c) = t * base[static_cast<std::size_t>(x)].cond_cdf().col(0) +
                     (1 - t) * base[static_cast<std::size_t>(x)].cond_cdf().col(1);
      }
      // A little of the Y law keeps every atom charged.
      cdf.col(c) = 0.9 * cdf.col(c) + 0.1 * y.cdf_values();
    }
  // The Y marginal of this construction is the w-mixture of the columns.
  const VectorXd mix = cdf * w;
  VectorXd probs(mix.size());
  for (Index j = 0; j < mix.size(); ++j) probs(j) = j == 0 ? mix(0) : mix(j) - mix(j - 1);
  probs(probs.size() - 1) = 1.0 - (probs.size() > 1 ? mix(mix.size() - 2) : 0.0);
  out.model = ConditionalModel(DiscreteMarginal(y.atoms(), probs), w, cdf);
  return out;
}

/// SI model in cell order: a reduced grid averaged onto `cells` equal u-cells.
inline ConditionalModel si_model(const ConditionalModel& source, Index cells) {
  const auto g = depord::reduce_to_si(source);
  const auto h = g.joint_cdf();  // H at u-breaks, piecewise linear in u
  const auto at = [&](Index j, double u) {
    const auto& b = g.u_breaks;
    auto k = std::upper_bound(b.data(), b.data() + b.size(), u) - b.data();
    k = std::clamp<Index>(k, 1, b.size() - 1);
    const double t = (u - b(k - 1)) / (b(k) - b(k - 1));
    return h(j, k - 1) + t * (h(j, k) - h(j, k - 1));
  };
  MatrixXd f(source.levels(), cells);
  const double width = 1.0 / static_cast<double>(cells);
  for (Index i = 0; i < cells; ++i)
    for (Index j = 0; j < source.levels(); ++j)
      f(j, i) = std::clamp((at(j, (i + 1) * width) - at(j, i * width)) / width, 0.0, 1.0);
  for (Index i = 0; i < cells; ++i)
    for (Index j = 1; j < source.levels(); ++j) f(j, i) = std::max(f(j, i), f(j - 1, i));
  f.row(source.levels() - 1).setOnes();
  return {source.y(), VectorXd::Constant(cells, width), f};
}

/// A pair (lo, hi) with lo <=ccx hi by construction, drawn from several recipes.
struct ComparablePair {
  ConditionalModel lo;
  ConditionalModel hi;
  const char* recipe;
};

inline ComparablePair comparable_pair(Rng& rng, const DiscreteMarginal& y, Index cells) {
  const auto hi = random_model(rng, y, cells);
  switch (integer(rng, 0, 4)) {
    case 0: {
      const auto groups = static_cast<Index>(integer(rng, 1, static_cast<int>(cells)));
      const auto labels = random_labels(rng, cells, groups);
      return {depord::merge_cells(hi, labels), hi, "merge"};
    }
    case 1:
      return {garble(rng, hi, static_cast<Index>(integer(rng, 1, 6))), hi, "garble"};
    case 2:
      return {ConditionalModel::independent(y), hi, "independent"};
    case 3:
      return {hi, perfect_model(y), "perfect"};
    default: {
      const auto pm = random_product_model(rng, y, static_cast<Index>(integer(rng, 1, 4)),
                                           static_cast<Index>(integer(rng, 1, 4)), uniform(rng) < 0.3);
      return {depord::marginalize_cells(pm.model, pm.cells, depord::Factor::X), pm.model, "marginalize"};
    }
  }
}

}  // namespace fuzz
