#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

#include "depord/dist_core.hpp"
#include "depord/models.hpp"
#include "depord/reduce.hpp"
#include "depord/verdict.hpp"

namespace depord {

inline constexpr std::string_view kSchema = "depord/1";

/// {"schema": "depord/1", y_atoms, y_probs, cell_weights, cond_cdf (rows = Y levels)}.
nlohmann::json model_to_json(const ConditionalModel& m);
/// Accepts the layout above; y_probs is optional (recovered from the mixture).
ConditionalModel model_from_json(const nlohmann::json& j);

nlohmann::json grid_to_json(const BivariateSIGrid& g);
nlohmann::json result_to_json(const ComparisonResult& r);

/// {"mean": [...], "cov": [[...], ...]}, Y first.
GaussianSpec gaussian_from_json(const nlohmann::json& j);
/// "p,q,alpha,beta".
BernoulliParams parse_bernoulli(std::string_view text);

nlohmann::json read_json_file(const std::string& path);

struct SourceOptions {
  SampleOptions samples;
  DiscretizeOptions gaussian;
};

/// A model from a source string: a .csv sample file, a .json grid,
/// "bernoulli:p,q,alpha,beta" or "gaussian:spec.json".
ConditionalModel load_model(std::string_view source, const SourceOptions& opts = {});

}  // namespace depord
