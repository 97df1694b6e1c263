#include "depord/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace depord {
namespace {

using nlohmann::json;

Eigen::VectorXd vector_from(const json& j, const char* name) {
  if (!j.is_array()) throw InputError(std::string(name) + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(std::string(name) + " must contain only numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_from(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(name) + " must be a nonempty array of rows");
  const auto cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw InputError(std::string(name) + " rows must have equal length");
    m.row(static_cast<Eigen::Index>(r)) = vector_from(j[r], name).transpose();
  }
  return m;
}

json vector_json(const Eigen::Ref<const Eigen::VectorXd>& v) { return json(std::vector<double>(v.begin(), v.end())); }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw InputError(std::string("missing field '") + name + "'");
  return j.at(name);
}

json witness_json(const Witness& w) { return {{"v", w.level}, {"x", w.x}, {"lhs", w.lhs}, {"rhs", w.rhs}}; }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

json model_to_json(const ConditionalModel& m) {
  return {{"schema", kSchema},
          {"y_atoms", vector_json(m.y().atoms())},
          {"y_probs", vector_json(m.y().probs())},
          {"cell_weights", vector_json(m.cell_weights())},
          {"cond_cdf", matrix_json(m.cond_cdf())}};
}

ConditionalModel model_from_json(const json& j) {
  if (!j.is_object()) throw InputError("grid JSON must be an object");
  if (j.contains("schema") && j.at("schema") != kSchema)
    throw InputError("unsupported schema (expected " + std::string(kSchema) + ")");
  const auto atoms = vector_from(field(j, "y_atoms"), "y_atoms");
  const auto weights = vector_from(field(j, "cell_weights"), "cell_weights");
  const auto cdf = matrix_from(field(j, "cond_cdf"), "cond_cdf");
  if (cdf.rows() != atoms.size() || cdf.cols() != weights.size())
    throw InputError("cond_cdf must have one row per y atom and one column per cell");
  Eigen::VectorXd probs;
  if (j.contains("y_probs")) {
    probs = vector_from(j.at("y_probs"), "y_probs");
  } else {
    const Eigen::VectorXd mix = cdf * weights;
    probs.resize(mix.size());
    for (Eigen::Index r = 0; r < mix.size(); ++r) probs(r) = r == 0 ? mix(0) : mix(r) - mix(r - 1);
    probs(probs.size() - 1) = 1.0 - (probs.size() > 1 ? mix(mix.size() - 2) : 0.0);
  }
  return {DiscreteMarginal(atoms, probs), weights, cdf};
}

json grid_to_json(const BivariateSIGrid& g) {
  return {{"schema", kSchema},
          {"u_breaks", vector_json(g.u_breaks)},
          {"y_atoms", vector_json(g.y.atoms())},
          {"y_probs", vector_json(g.y.probs())},
          {"G", matrix_json(g.G)},
          {"si_mass", matrix_json(si_mass_matrix(g))}};
}

json result_to_json(const ComparisonResult& r) {
  json out = {{"verdict", to_string(r.verdict)}, {"tol", r.tol}, {"criterion", r.criterion}};
  out["witness"] = r.witness ? witness_json(*r.witness) : json(nullptr);
  out["reverse_witness"] = r.reverse_witness ? witness_json(*r.reverse_witness) : json(nullptr);
  json levels = json::array();
  for (const auto& l : r.per_level)
    levels.push_back({{"v", l.level},
                      {"schur_verdict", to_string(l.verdict)},
                      {"max_violation", std::max(l.max_a_over_b, l.max_b_over_a)},
                      {"max_a_over_b", l.max_a_over_b},
                      {"max_b_over_a", l.max_b_over_a}});
  out["per_level"] = levels;
  if (r.verdict == Verdict::MarginalMismatch)
    out["reason"] = "closures of the ranges of the two Y distribution functions differ";
  return out;
}

GaussianSpec gaussian_from_json(const json& j) {
  GaussianSpec s;
  s.cov = matrix_from(field(j, "cov"), "cov");
  s.mean = j.contains("mean") ? vector_from(j.at("mean"), "mean") : Eigen::VectorXd::Zero(s.cov.rows());
  s.validate();
  return s;
}

BernoulliParams parse_bernoulli(std::string_view text) {
  double v[4];
  for (int i = 0; i < 4; ++i) {
    const auto comma = text.find(',');
    if ((i < 3) == (comma == std::string_view::npos))
      throw InputError("Bernoulli spec must be p,q,alpha,beta");
    auto part = text.substr(0, comma);
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v[i]);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size())
      throw InputError("Bernoulli spec has a non-numeric field");
    if (i < 3) text.remove_prefix(comma + 1);
  }
  BernoulliParams b{v[0], v[1], v[2], v[3]};
  b.validate();
  return b;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

ConditionalModel load_model(std::string_view source, const SourceOptions& opts) {
  try {
    if (source.starts_with("bernoulli:")) return bernoulli_to_model(parse_bernoulli(source.substr(10)));
    if (source.starts_with("gaussian:"))
      return gaussian_discretize(gaussian_from_json(read_json_file(std::string(source.substr(9)))), opts.gaussian);
    const std::string path(source);
    if (ends_with(source, ".json")) return model_from_json(read_json_file(path));
    if (ends_with(source, ".csv")) {
      std::ifstream in(path);
      if (!in) throw InputError("cannot open '" + path + "'");
      const auto rows = read_samples_csv(in);
      return from_samples(rows, opts.samples);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON content: ") + e.what());
  }
  throw InputError("unrecognised model source '" + std::string(source) +
                   "' (expected .csv, .json, bernoulli:p,q,a,b or gaussian:file.json)");
}

}  // namespace depord
