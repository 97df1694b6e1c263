#include <doctest.h>

#include <random>
#include <sstream>

#include "depord/dist_core.hpp"
#include "depord/measures.hpp"
#include "depord/models.hpp"
#include "fuzz.hpp"

using namespace depord;

namespace {
DiscreteMarginal bern(double q, double a0 = 0.0, double a1 = 1.0) {
  return {Eigen::Vector2d(a0, a1), Eigen::Vector2d(1.0 - q, q)};
}
}  // namespace

TEST_CASE("quantile is the left-continuous generalized inverse") {
  CHECK(quantile(bern(0.5), 0.3) == 0.0);
  CHECK(quantile(bern(0.5), 0.7) == 1.0);
  CHECK(quantile(bern(0.5), 0.5) == 0.0);
  const DiscreteMarginal m(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(0.2, 0.3, 0.5));
  CHECK(quantile(m, 0.5) == 2.0);
  CHECK(quantile(m, 0.2) == 1.0);
  CHECK(quantile(m, 0.2000001) == 2.0);
  CHECK_THROWS_AS(quantile(m, 0.0), std::domain_error);
  CHECK_THROWS_AS(quantile(m, 1.0), std::domain_error);
  CHECK_THROWS_AS(quantile(m, -0.1), std::domain_error);
}

TEST_CASE("quantile inverts the cdf at every atom") {
  fuzz::Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto m = fuzz::random_marginal(rng, fuzz::integer(rng, 1, 12));
    for (Eigen::Index j = 0; j < m.size(); ++j) {
      const double c = m.cdf(m.atoms()(j));
      if (c < 1.0) CHECK(quantile(m, c) == m.atoms()(j));
    }
  }
}

TEST_CASE("range closure") {
  CHECK(range_closure(bern(0.5)) == std::vector<double>{0.0, 0.5, 1.0});
  const DiscreteMarginal m(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(0.2, 0.3, 0.5));
  const auto c = range_closure(m);
  REQUIRE(c.size() == 4);
  CHECK(c[1] == doctest::Approx(0.2));
  CHECK(c[2] == doctest::Approx(0.5));
  CHECK(c[3] == 1.0);
  CHECK(range_closure(DiscreteMarginal::point_mass(4.0)) == std::vector<double>{0.0, 1.0});
  // invariant under strictly increasing relabelling
  const DiscreteMarginal relabelled(Eigen::Vector3d(-7, 0, 100), m.probs());
  CHECK(range_closure(relabelled) == c);
}

TEST_CASE("marginal constraint") {
  CHECK(marginal_constraint(bern(0.5), bern(0.5, 10, 20)));
  CHECK_FALSE(marginal_constraint(bern(0.5), bern(0.4)));
  // Staircase laws: Y' = Y + 2 below 0.5 and Y + 1.5 above moves atoms but keeps Ran F.
  const DiscreteMarginal y(Eigen::Vector3d(0.5, 0.8, 1.2), Eigen::Vector3d(0.4, 0.4, 0.2));
  const DiscreteMarginal y2(Eigen::Vector3d(2.3, 2.5, 2.7), Eigen::Vector3d(0.4, 0.4, 0.2));
  CHECK(marginal_constraint(y, y2));
  CHECK_FALSE(marginal_constraint(y, DiscreteMarginal::uniform(Eigen::Vector3d(1, 2, 3))));
}

TEST_CASE("marginal validation") {
  CHECK_THROWS_AS(DiscreteMarginal(Eigen::Vector2d(1, 1), Eigen::Vector2d(0.5, 0.5)), InputError);
  CHECK_THROWS_AS(DiscreteMarginal(Eigen::Vector2d(1, 2), Eigen::Vector2d(0.5, 0.6)), InputError);
  CHECK_THROWS_AS(DiscreteMarginal(Eigen::Vector2d(1, 2), Eigen::Vector2d(1.0, 0.0)), InputError);
  CHECK_THROWS_AS(DiscreteMarginal(Eigen::VectorXd(), Eigen::VectorXd()), InputError);
  const DiscreteMarginal m(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(0.1, 0.2, 0.7));
  CHECK(m.cdf_values()(2) == 1.0);
  CHECK(m.cdf(0.5) == 0.0);
  CHECK(m.cdf(2.0) == doctest::Approx(0.3));
  CHECK(m.cdf_left(2.0) == doctest::Approx(0.1));
}

TEST_CASE("step functions") {
  const auto f = StepFunction::from_widths(Eigen::Vector2d(0.25, 0.75), Eigen::Vector2d(2.0, 4.0));
  CHECK(f.integral() == doctest::Approx(3.5));
  CHECK(f(0.1) == 2.0);
  CHECK(f(0.25) == 2.0);
  CHECK(f(0.3) == 4.0);
  CHECK_THROWS_AS(StepFunction(Eigen::Vector3d(0, 0.5, 0.4), Eigen::Vector2d(1, 1)), InputError);
  CHECK_THROWS_AS(StepFunction(Eigen::Vector2d(0.1, 1), Eigen::VectorXd::Ones(1)), InputError);
}

TEST_CASE("conditional model validation") {
  const DiscreteMarginal y = bern(0.5);
  Eigen::MatrixXd f(2, 2);
  f << 1.0, 0.0, 1.0, 1.0;
  CHECK_NOTHROW(ConditionalModel(y, Eigen::Vector2d(0.5, 0.5), f));
  CHECK_THROWS_AS(ConditionalModel(y, Eigen::Vector2d(0.4, 0.6), f), InputError);  // consistency
  Eigen::MatrixXd bad(2, 2);
  bad << 0.6, 0.4, 0.5, 1.0;  // column decreasing
  CHECK_THROWS_AS(ConditionalModel(y, Eigen::Vector2d(0.5, 0.5), bad), InputError);
  bad << 0.5, 0.5, 0.9, 1.0;  // last row not 1
  CHECK_THROWS_AS(ConditionalModel(y, Eigen::Vector2d(0.5, 0.5), bad), InputError);
  CHECK_THROWS_AS(ConditionalModel(y, Eigen::Vector3d(0.2, 0.3, 0.5), f), InputError);
}

TEST_CASE("marginal consistency holds for every generated model and joint round-trips") {
  fuzz::Rng rng(3);
  for (int t = 0; t < 300; ++t) {
    const auto m = fuzz::random_model(rng, fuzz::integer(rng, 1, 10), fuzz::integer(rng, 1, 10));
    const Eigen::VectorXd mix = m.cond_cdf() * m.cell_weights();
    CHECK((mix - m.y().cdf_values()).cwiseAbs().maxCoeff() <= 1e-10);
    const auto back = ConditionalModel::from_joint(m.y().atoms(), m.joint());
    CHECK((back.cond_cdf() - m.cond_cdf()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("from_samples: perfect dependence") {
  std::vector<SampleRow> rows;
  for (int i = 0; i < 500; ++i) {
    rows.push_back({0.0, {0.0}});
    rows.push_back({1.0, {1.0}});
  }
  const auto m = from_samples(rows, {2, 200});
  REQUIRE(m.levels() == 2);
  REQUIRE(m.cells() == 2);
  CHECK(m.cond_cdf()(0, 0) == 1.0);
  CHECK(m.cond_cdf()(0, 1) == 0.0);
  CHECK(m.cond_cdf()(1, 0) == 1.0);
  CHECK(m.cond_cdf()(1, 1) == 1.0);
}

TEST_CASE("from_samples: deterministic y = g(cell) gives 0/1 columns") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SampleRow> rows;
  for (int i = 0; i < 2000; ++i) {
    // three tied x1 values; each run of ties starts past the next rank-bin boundary
    const double draw = u(rng);
    const double x1 = draw < 0.4 ? 0.0 : draw < 0.75 ? 1.0 : 2.0;
    const double x2 = u(rng);
    rows.push_back({10.0 * x1 - x1 * x1, {x1, x2}});
  }
  const auto m = from_samples(rows, {8, 200});
  CHECK(m.cells() == 6);  // 3 x 2 rank bins
  for (Eigen::Index j = 0; j < m.levels(); ++j)
    for (Eigen::Index i = 0; i < m.cells(); ++i) {
      const double f = m.cond_cdf()(j, i);
      CHECK((f == 0.0 || f == 1.0));
    }
}

TEST_CASE("from_samples: independent y gives near-identical columns") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SampleRow> rows;
  for (int i = 0; i < 40000; ++i) rows.push_back({std::floor(3 * u(rng)), {u(rng)}});
  const auto m = from_samples(rows, {4, 200});
  for (Eigen::Index j = 0; j < m.levels(); ++j) {
    const auto r = m.cond_cdf().row(j);
    CHECK(r.maxCoeff() - r.minCoeff() < 0.03);
  }
}

TEST_CASE("from_samples: Gaussian sample xi is close to the exact-cdf model") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<SampleRow> rows;
  for (int i = 0; i < 100000; ++i) {
    const double x = z(rng);
    rows.push_back({x + z(rng), {x}});
  }
  const auto sample = from_samples(rows, {30, 200});
  CHECK(sample.levels() == 200);
  GaussianSpec s;
  s.mean = Eigen::Vector2d::Zero();
  s.cov.resize(2, 2);
  s.cov << 2.0, 1.0, 1.0, 1.0;
  const auto exact = gaussian_discretize(s, {30, 200, 0, 0});
  CHECK(std::abs(chatterjee_xi(sample) - chatterjee_xi(exact)) < 0.03);
}

TEST_CASE("from_samples errors and binning") {
  CHECK_THROWS_AS(from_samples({}, {2, 200}), InputError);
  std::vector<SampleRow> rows = {{0.0, {1.0}}, {1.0, {1.0, 2.0}}};
  CHECK_THROWS_AS(from_samples(rows, {1, 200}), InputError);
  std::vector<SampleRow> many;
  for (int i = 0; i < 1000; ++i) many.push_back({static_cast<double>(i), {static_cast<double>(i % 7)}});
  const auto m = from_samples(many, {7, 200});
  CHECK(m.levels() == 200);
  CHECK(m.y().probs().minCoeff() == doctest::Approx(0.005));
}

TEST_CASE("CSV ingestion") {
  std::istringstream ok("y,x1,x2\n1.5, 2 ,3\n-1,0,1e3\n");
  const auto rows = read_samples_csv(ok);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].y == 1.5);
  CHECK(rows[0].x[0] == 2.0);
  CHECK(rows[1].x[1] == 1000.0);
  std::istringstream missing("y,x\n1,\n");
  CHECK_THROWS_AS(read_samples_csv(missing), InputError);
  std::istringstream text("y,x\n1,abc\n");
  CHECK_THROWS_AS(read_samples_csv(text), InputError);
  std::istringstream ragged("y,x\n1,2,3\n");
  CHECK_THROWS_AS(read_samples_csv(ragged), InputError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_samples_csv(empty), InputError);
}
