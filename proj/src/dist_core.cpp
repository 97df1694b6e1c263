#include "depord/dist_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace depord {

bool nearly_equal(double a, double b, double rel, double abs_floor) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= std::max(abs_floor, rel * scale);
}

// ---------------------------------------------------------------------------
// DiscreteMarginal

DiscreteMarginal::DiscreteMarginal(Eigen::VectorXd atoms, Eigen::VectorXd probs)
    : atoms_(std::move(atoms)), probs_(std::move(probs)) {
  if (atoms_.size() == 0) throw InputError("marginal needs at least one atom");
  if (atoms_.size() != probs_.size()) throw InputError("atoms and probs differ in length");
  for (Eigen::Index j = 0; j < atoms_.size(); ++j) {
    if (!std::isfinite(atoms_(j)) || !std::isfinite(probs_(j)))
      throw InputError("marginal contains a non-finite value");
    if (probs_(j) <= 0.0) throw InputError("marginal probabilities must be positive");
    if (j > 0 && !(atoms_(j) > atoms_(j - 1))) throw InputError("atoms must be strictly increasing");
  }
  const double total = probs_.sum();
  if (std::abs(total - 1.0) > kProbSumTol) {
    std::ostringstream msg;
    msg << "marginal probabilities sum to " << total << ", expected 1";
    throw InputError(msg.str());
  }
  cdf_.resize(probs_.size());
  double acc = 0.0;
  for (Eigen::Index j = 0; j < probs_.size(); ++j) {
    acc += probs_(j);
    cdf_(j) = std::min(acc, 1.0);
  }
  cdf_(cdf_.size() - 1) = 1.0;
}

DiscreteMarginal DiscreteMarginal::uniform(Eigen::VectorXd atoms) {
  const auto m = atoms.size();
  if (m == 0) throw InputError("marginal needs at least one atom");
  return {std::move(atoms), Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m))};
}

DiscreteMarginal DiscreteMarginal::point_mass(double atom) {
  return {Eigen::VectorXd::Constant(1, atom), Eigen::VectorXd::Ones(1)};
}

double DiscreteMarginal::cdf(double y) const {
  const auto* first = atoms_.data();
  const auto* last = first + atoms_.size();
  const auto pos = std::upper_bound(first, last, y) - first;
  return pos == 0 ? 0.0 : cdf_(pos - 1);
}

double DiscreteMarginal::cdf_left(double y) const {
  const auto* first = atoms_.data();
  const auto* last = first + atoms_.size();
  const auto pos = std::lower_bound(first, last, y) - first;
  return pos == 0 ? 0.0 : cdf_(pos - 1);
}

Eigen::Index DiscreteMarginal::quantile_index(double v) const {
  if (!(v > 0.0 && v < 1.0)) throw std::domain_error("quantile level must lie in (0, 1)");
  const auto* first = cdf_.data();
  const auto* last = first + cdf_.size();
  const auto pos = std::lower_bound(first, last, v) - first;
  return std::min<Eigen::Index>(pos, cdf_.size() - 1);
}

double quantile(const DiscreteMarginal& m, double v) { return m.atoms()(m.quantile_index(v)); }

std::vector<double> range_closure(const DiscreteMarginal& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()) + 1);
  out.push_back(0.0);
  for (Eigen::Index j = 0; j < m.size(); ++j) out.push_back(m.cdf_values()(j));
  return out;
}

bool marginal_constraint(const DiscreteMarginal& a, const DiscreteMarginal& b, double tol) {
  if (a.size() != b.size()) return false;
  return ((a.cdf_values() - b.cdf_values()).cwiseAbs().array() <= tol).all();
}

// ---------------------------------------------------------------------------
// StepFunction

StepFunction::StepFunction(Eigen::VectorXd breaks, Eigen::VectorXd values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
  if (values_.size() == 0 || breaks_.size() != values_.size() + 1)
    throw InputError("step function needs K values and K+1 breakpoints");
  if (breaks_(0) != 0.0 || std::abs(breaks_(breaks_.size() - 1) - 1.0) > kProbSumTol)
    throw InputError("step function breakpoints must run from 0 to 1");
  breaks_(breaks_.size() - 1) = 1.0;
  for (Eigen::Index k = 1; k < breaks_.size(); ++k)
    if (!(breaks_(k) > breaks_(k - 1))) throw InputError("breakpoints must be strictly increasing");
  if (!values_.allFinite()) throw InputError("step function values must be finite");
}

StepFunction StepFunction::from_widths(const Eigen::Ref<const Eigen::VectorXd>& widths,
                                       const Eigen::Ref<const Eigen::VectorXd>& values) {
  if (widths.size() != values.size()) throw InputError("widths and values differ in length");
  Eigen::VectorXd breaks(widths.size() + 1);
  breaks(0) = 0.0;
  for (Eigen::Index k = 0; k < widths.size(); ++k) breaks(k + 1) = breaks(k) + widths(k);
  return {std::move(breaks), values};
}

StepFunction StepFunction::constant(double c) {
  return {Eigen::Vector2d(0.0, 1.0), Eigen::VectorXd::Constant(1, c)};
}

Eigen::VectorXd StepFunction::widths() const {
  return breaks_.tail(values_.size()) - breaks_.head(values_.size());
}

double StepFunction::integral() const { return widths().dot(values_); }

double StepFunction::operator()(double u) const {
  const auto* first = breaks_.data() + 1;
  const auto* last = breaks_.data() + breaks_.size();
  auto pos = std::lower_bound(first, last, u) - first;
  return values_(std::min<Eigen::Index>(pos, values_.size() - 1));
}

// ---------------------------------------------------------------------------
// ConditionalModel

ConditionalModel::ConditionalModel(DiscreteMarginal y, Eigen::VectorXd cell_weights,
                                   Eigen::MatrixXd cond_cdf)
    : y_(std::move(y)), weights_(std::move(cell_weights)), cdf_(std::move(cond_cdf)) {
  const auto m = y_.size();
  const auto n = weights_.size();
  if (n == 0) throw InputError("model needs at least one cell");
  if (cdf_.rows() != m || cdf_.cols() != n) {
    std::ostringstream msg;
    msg << "cond_cdf has shape " << cdf_.rows() << "x" << cdf_.cols() << ", expected " << m << "x" << n;
    throw InputError(msg.str());
  }
  if ((weights_.array() <= 0.0).any()) throw InputError("cell weights must be positive");
  if (std::abs(weights_.sum() - 1.0) > kProbSumTol) throw InputError("cell weights must sum to 1");
  if (!cdf_.allFinite()) throw InputError("cond_cdf contains a non-finite value");
  constexpr double slack = 1e-12;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double f = cdf_(j, i);
      if (f < -slack || f > 1.0 + slack) throw InputError("cond_cdf entries must lie in [0, 1]");
      if (j > 0 && f < cdf_(j - 1, i) - slack) throw InputError("cond_cdf columns must be nondecreasing");
    }
    if (std::abs(cdf_(m - 1, i) - 1.0) > slack) throw InputError("cond_cdf last row must equal 1");
    cdf_(m - 1, i) = 1.0;
  }
  const Eigen::VectorXd mixed = cdf_ * weights_;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (std::abs(mixed(j) - y_.cdf_values()(j)) > kConsistencyTol) {
      std::ostringstream msg;
      msg << "marginal consistency violated at level " << j << ": mixture " << mixed(j)
          << " vs cdf " << y_.cdf_values()(j);
      throw InputError(msg.str());
    }
  }
}

ConditionalModel ConditionalModel::from_joint(const Eigen::Ref<const Eigen::VectorXd>& y_atoms,
                                              const Eigen::Ref<const Eigen::MatrixXd>& joint) {
  if (joint.rows() != y_atoms.size()) throw InputError("joint rows must match y atoms");
  if ((joint.array() < 0.0).any()) throw InputError("joint masses must be nonnegative");
  const double total = joint.sum();
  if (std::abs(total - 1.0) > kProbSumTol) throw InputError("joint masses must sum to 1");
  const Eigen::VectorXd probs = joint.rowwise().sum();
  const Eigen::VectorXd weights = joint.colwise().sum().transpose();
  if ((probs.array() <= 0.0).any()) throw InputError("every y atom needs positive mass");
  if ((weights.array() <= 0.0).any()) throw InputError("every cell needs positive mass");
  Eigen::MatrixXd cdf(joint.rows(), joint.cols());
  for (Eigen::Index i = 0; i < joint.cols(); ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < joint.rows(); ++j) {
      acc += joint(j, i);
      cdf(j, i) = std::min(acc / weights(i), 1.0);
    }
    cdf(joint.rows() - 1, i) = 1.0;
  }
  return {DiscreteMarginal(y_atoms, probs), weights, std::move(cdf)};
}

ConditionalModel ConditionalModel::independent(const DiscreteMarginal& y) {
  return {y, Eigen::VectorXd::Ones(1), y.cdf_values()};
}

Eigen::MatrixXd ConditionalModel::joint() const {
  Eigen::MatrixXd mass(cdf_.rows(), cdf_.cols());
  mass.row(0) = cdf_.row(0);
  for (Eigen::Index j = 1; j < cdf_.rows(); ++j) mass.row(j) = cdf_.row(j) - cdf_.row(j - 1);
  return mass * weights_.asDiagonal();
}

StepFunction ConditionalModel::level_function(Eigen::Index j) const {
  return StepFunction::from_widths(weights_, cdf_.row(j).transpose());
}

ConditionalModel relabel_y(const ConditionalModel& m, const Eigen::Ref<const Eigen::VectorXd>& new_atoms) {
  return {DiscreteMarginal(new_atoms, m.y().probs()), m.cell_weights(), m.cond_cdf()};
}

ConditionalModel y_to_cdf_values(const ConditionalModel& m) { return relabel_y(m, m.y().cdf_values()); }

ConditionalModel permute_cells(const ConditionalModel& m, std::span<const Eigen::Index> perm) {
  if (static_cast<Eigen::Index>(perm.size()) != m.cells()) throw InputError("permutation has wrong length");
  Eigen::VectorXd w(m.cells());
  Eigen::MatrixXd f(m.levels(), m.cells());
  for (Eigen::Index k = 0; k < m.cells(); ++k) {
    const auto src = perm[static_cast<std::size_t>(k)];
    if (src < 0 || src >= m.cells()) throw InputError("permutation index out of range");
    w(k) = m.cell_weights()(src);
    f.col(k) = m.cond_cdf().col(src);
  }
  return {m.y(), std::move(w), std::move(f)};
}

}  // namespace depord
