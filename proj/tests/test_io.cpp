#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "depord/ccx.hpp"
#include "depord/io.hpp"
#include "fuzz.hpp"

using namespace depord;
using nlohmann::json;

namespace {
std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("depord_io_" + name);
  std::ofstream(path) << content;
  return path.string();
}
}  // namespace

TEST_CASE("model JSON round trip is exact") {
  fuzz::Rng rng(181);
  for (int t = 0; t < 100; ++t) {
    const auto m = fuzz::random_model(rng, fuzz::integer(rng, 1, 8), fuzz::integer(rng, 1, 8));
    const auto back = model_from_json(json::parse(model_to_json(m).dump()));
    CHECK(back.y().atoms() == m.y().atoms());
    CHECK(back.cell_weights() == m.cell_weights());
    CHECK(back.cond_cdf() == m.cond_cdf());
    CHECK(ccx_compare(m, back).verdict == Verdict::Equal);
  }
}

TEST_CASE("y_probs are optional") {
  const json j = {{"y_atoms", {0, 1}}, {"cell_weights", {0.5, 0.5}}, {"cond_cdf", {{0.2, 0.6}, {1, 1}}}};
  const auto m = model_from_json(j);
  CHECK(m.y().probs()(0) == doctest::Approx(0.4));
}

TEST_CASE("malformed model JSON is rejected") {
  const json good = {{"schema", "depord/1"}, {"y_atoms", {0, 1}}, {"cell_weights", {1.0}}, {"cond_cdf", {{0.5}, {1}}}};
  CHECK_NOTHROW(model_from_json(good));
  auto bad = good;
  bad["schema"] = "other/2";
  CHECK_THROWS_AS(model_from_json(bad), InputError);
  bad = good;
  bad.erase("cond_cdf");
  CHECK_THROWS_AS(model_from_json(bad), InputError);
  bad = good;
  bad["cond_cdf"] = {{0.5, 0.2}, {1}};
  CHECK_THROWS_AS(model_from_json(bad), InputError);
  bad = good;
  bad["y_atoms"] = {0, "x"};
  CHECK_THROWS_AS(model_from_json(bad), InputError);
  bad = good;
  bad["cond_cdf"] = {{0.5}, {1}, {1}};
  CHECK_THROWS_AS(model_from_json(bad), InputError);
  bad = good;
  bad["y_probs"] = {0.2, 0.8};  // inconsistent with the mixture
  CHECK_THROWS_AS(model_from_json(bad), InputError);
  CHECK_THROWS_AS(model_from_json(json::array()), InputError);
}

TEST_CASE("result JSON carries witnesses and reasons") {
  const auto y = DiscreteMarginal::uniform(Eigen::Vector3d(0, 1, 2));
  Eigen::MatrixXd fa(3, 2), fb(3, 2);
  fa << 2.0 / 3, 0, 2.0 / 3, 2.0 / 3, 1, 1;
  fb << 1.0 / 3, 1.0 / 3, 1, 1.0 / 3, 1, 1;
  const ConditionalModel a(y, Eigen::Vector2d(0.5, 0.5), fa), b(y, Eigen::Vector2d(0.5, 0.5), fb);
  const auto j = result_to_json(ccx_compare(a, b));
  CHECK(j["verdict"] == "Incomparable");
  CHECK(j["witness"].is_object());
  CHECK(j["reverse_witness"].is_object());
  CHECK(j["per_level"].size() == 2);
  const auto mm = result_to_json(ccx_compare(a, ConditionalModel::independent(DiscreteMarginal::uniform(Eigen::Vector2d(0, 1)))));
  CHECK(mm["verdict"] == "MarginalMismatch");
  CHECK(mm.contains("reason"));
  const auto eq = result_to_json(ccx_compare(a, a));
  CHECK(eq["witness"].is_null());
}

TEST_CASE("grid JSON") {
  fuzz::Rng rng(5);
  const auto g = reduce_to_si(fuzz::random_model(rng, 4, 3));
  const auto j = grid_to_json(g);
  CHECK(j["u_breaks"].size() == static_cast<std::size_t>(g.u_breaks.size()));
  CHECK(j["G"].size() == 4);
  CHECK(j["si_mass"].size() == 4);
}

TEST_CASE("Bernoulli spec parsing") {
  const auto b = parse_bernoulli("0.5, 0.45,0.6,0.5");
  CHECK(b.p == 0.5);
  CHECK(b.q == 0.45);
  CHECK(b.alpha == 0.6);
  CHECK(b.beta == 0.5);
  CHECK_THROWS_AS(parse_bernoulli("0.5,0.5,0.5"), InputError);
  CHECK_THROWS_AS(parse_bernoulli("0.5,0.5,0.5,x"), InputError);
  CHECK_THROWS_AS(parse_bernoulli("0.5,0.9,0.5,0.5"), InputError);  // q inconsistent
}

TEST_CASE("Gaussian JSON") {
  const json j = {{"cov", {{1, 0.5}, {0.5, 1}}}};
  const auto g = gaussian_from_json(j);
  CHECK(g.mean.size() == 2);
  CHECK(g.mean.isZero());
  CHECK_THROWS_AS(gaussian_from_json(json{{"mean", {0, 0}}}), InputError);
  CHECK_THROWS_AS(gaussian_from_json(json{{"mean", {0}}, {"cov", {{1, 0.5}, {0.5, 1}}}}), InputError);
}

TEST_CASE("model sources") {
  const auto bern = load_model("bernoulli:0.5,0.45,0.6,0.5");
  CHECK(bern.levels() == 2);
  CHECK(bern.cells() == 2);

  fuzz::Rng rng(191);
  const auto m = fuzz::random_model(rng, 3, 2);
  const auto path = temp_file("model.json", model_to_json(m).dump());
  CHECK(ccx_compare(load_model(path), m).verdict == Verdict::Equal);

  const auto gpath = temp_file("gauss.json", R"({"cov": [[1, 0.5], [0.5, 1]]})");
  SourceOptions so;
  so.gaussian.n_cells = 8;
  so.gaussian.n_levels = 6;
  const auto gm = load_model("gaussian:" + gpath, so);
  CHECK(gm.levels() == 6);
  CHECK(gm.cells() == 8);

  const auto cpath = temp_file("samples.csv", "y,x\n1,0\n2,1\n3,2\n4,3\n");
  so.samples.n_cells = 2;
  const auto cm = load_model(cpath, so);
  CHECK(cm.cells() == 2);
  CHECK(cm.levels() == 4);

  CHECK_THROWS_AS(load_model("model.txt"), InputError);
  CHECK_THROWS_AS(load_model("/nonexistent/depord.json"), InputError);
  CHECK_THROWS_AS(load_model(temp_file("broken.json", "{\"y_atoms\": [")), InputError);
  CHECK_THROWS_AS(load_model("bernoulli:1,2"), InputError);
}
