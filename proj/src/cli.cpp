#include "depord/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "depord/ccx.hpp"
#include "depord/io.hpp"
#include "depord/measures.hpp"
#include "depord/models.hpp"
#include "depord/oracle.hpp"
#include "depord/rearrange.hpp"
#include "depord/reduce.hpp"

namespace depord::cli {
namespace {

using nlohmann::json;

struct Options {
  double tol = kDefaultTol;
  int grid = 10;
  int levels = 50;
  std::uint64_t seed = 0;
  std::int64_t mc = 0;
  std::string phi = "square";
  std::string measure = "xi";
  std::string engine = "schur";
  std::string format = "json";
  unsigned threads = 1;
};

SourceOptions source_options(const Options& o) {
  SourceOptions s;
  s.samples.n_cells = o.grid;
  s.samples.max_atoms = std::max(o.levels, 200);
  s.gaussian.n_cells = o.grid;
  s.gaussian.n_levels = o.levels;
  s.gaussian.mc_samples = o.mc;
  s.gaussian.seed = o.seed;
  return s;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

int cmd_compare(const Options& o, const std::string& a_src, const std::string& b_src, std::ostream& out) {
  const auto so = source_options(o);
  const auto a = load_model(a_src, so);
  const auto b = load_model(b_src, so);
  const bool all = o.engine == "all";
  json engines = json::object();
  std::optional<ComparisonResult> primary;
  if (all || o.engine == "schur") {
    primary = ccx_compare(a, b, o.tol, o.threads);
    engines["schur"] = to_string(primary->verdict);
  }
  if (all || o.engine == "concordance") {
    auto r = ccx_via_concordance(a, b, o.tol);
    engines["concordance"] = to_string(r.verdict);
    if (!primary) primary = std::move(r);
  }
  if (all || o.engine == "brute") {
    auto r = ccx_bruteforce(a, b, o.tol);
    engines["bruteforce"] = to_string(r.verdict);
    if (!primary) primary = std::move(r);
  }
  if (o.format == "csv") {
    out << "v,verdict,max_a_over_b,max_b_over_a\n";
    for (const auto& l : primary->per_level)
      out << fmt(l.level) << ',' << to_string(l.verdict) << ',' << fmt(l.max_a_over_b) << ','
          << fmt(l.max_b_over_a) << '\n';
    out << "all," << to_string(primary->verdict) << ",,\n";
    return kOk;
  }
  json report = result_to_json(*primary);
  report["engines"] = engines;
  bool agree = true;
  for (const auto& [name, verdict] : engines.items()) agree = agree && verdict == report["verdict"];
  report["engines_agree"] = agree;
  report["models"] = {{"a", model_to_json(a)}, {"b", model_to_json(b)}};
  emit(out, report);
  return kOk;
}

int cmd_measure(const Options& o, const std::string& src, std::ostream& out) {
  const auto m = load_model(src, source_options(o));
  const auto phi = PhiSpec::parse(o.phi);
  const std::vector<std::string> all_names = {"xi", "xi-phi", "lambda-phi", "nu",
                                              "rho-rearranged", "tau-rearranged", "gamma-rearranged"};
  const auto value = [&](const std::string& name) -> double {
    if (name == "xi") return chatterjee_xi(m);
    if (name == "xi-phi") return xi_phi(m, phi);
    if (name == "lambda-phi") return lambda_phi(m, phi);
    if (name == "nu") return integrated_r2_nu(m);
    if (name == "rho-rearranged") return rearranged_measure(m, RearrangedKind::SpearmanRho);
    if (name == "tau-rearranged") return rearranged_measure(m, RearrangedKind::KendallTau);
    if (name == "gamma-rearranged") return rearranged_measure(m, RearrangedKind::GiniGamma);
    throw InputError("unknown measure '" + name + "'");
  };
  std::vector<std::string> names = o.measure == "all" ? all_names : std::vector<std::string>{o.measure};
  json values = json::object();
  for (const auto& n : names) values[n] = value(n);
  if (o.format == "csv") {
    out << "measure,value\n";
    for (const auto& n : names) out << n << ',' << fmt(values[n].get<double>()) << '\n';
    return kOk;
  }
  json report = {{"phi", phi.name()}, {"values", values}};
  if (names.size() == 1) report["value"] = values[names.front()];
  emit(out, report);
  return kOk;
}

int cmd_reduce(const Options& o, const std::string& src, std::ostream& out) {
  const auto grid = reduce_to_si(load_model(src, source_options(o)));
  if (o.format == "csv") {
    const auto mass = si_mass_matrix(grid);
    out << "y_atom";
    for (Eigen::Index k = 0; k < mass.cols(); ++k) out << ",u" << k;
    out << '\n';
    for (Eigen::Index j = 0; j < mass.rows(); ++j) {
      out << fmt(grid.y.atoms()(j));
      for (Eigen::Index k = 0; k < mass.cols(); ++k) out << ',' << fmt(mass(j, k));
      out << '\n';
    }
    return kOk;
  }
  json report = grid_to_json(grid);
  report["is_si"] = verify_si(grid, o.tol);
  emit(out, report);
  return kOk;
}

json classify_json(const BernoulliParams& b) {
  const auto c = bernoulli_classify(b);
  json flags = json::array();
  if (c.independent) flags.push_back("Independent");
  if (c.perfect) flags.push_back("Perfect");
  if (c.comonotone) flags.push_back("Comonotone");
  if (c.countermonotone) flags.push_back("Countermonotone");
  if (c.none()) flags.push_back("None");
  return flags;
}

int cmd_bernoulli(const Options& o, const std::string& a_spec, const std::string& b_spec, std::ostream& out) {
  const auto a = parse_bernoulli(a_spec);
  json report = {{"a", {{"p", a.p}, {"q", a.q}, {"alpha", a.alpha}, {"beta", a.beta}, {"classes", classify_json(a)}}}};
  if (!b_spec.empty()) {
    const auto b = parse_bernoulli(b_spec);
    report["b"] = {{"p", b.p}, {"q", b.q}, {"alpha", b.alpha}, {"beta", b.beta}, {"classes", classify_json(b)}};
    auto closed = bernoulli_ccx(a, b, std::min(o.tol, kDefaultTol));
    report["comparison"] = result_to_json(closed);
    if (closed.verdict != Verdict::MarginalMismatch)
      report["engine_verdict"] = to_string(ccx_compare(bernoulli_to_model(a), bernoulli_to_model(b), o.tol).verdict);
  }
  emit(out, report);
  return kOk;
}

int cmd_gaussian(const Options& o, const std::string& a_path, const std::string& b_path, std::ostream& out) {
  const auto a = gaussian_from_json(read_json_file(a_path));
  const auto so = source_options(o);
  json report = {{"a", {{"r2", gaussian_r2(a)}, {"xi_discretized", chatterjee_xi(gaussian_discretize(a, so.gaussian))}}}};
  if (!b_path.empty()) {
    const auto b = gaussian_from_json(read_json_file(b_path));
    report["b"] = {{"r2", gaussian_r2(b)}, {"xi_discretized", chatterjee_xi(gaussian_discretize(b, so.gaussian))}};
    report["comparison"] = result_to_json(gaussian_ccx(a, b, o.tol));
  }
  report["discretization"] = {{"cells", so.gaussian.n_cells}, {"levels", so.gaussian.n_levels},
                              {"mc_samples", so.gaussian.mc_samples}, {"seed", so.gaussian.seed}};
  emit(out, report);
  return kOk;
}

DiscreteMarginal parse_law(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string shape = spec.substr(0, colon);
  int atoms = 41;
  if (colon != std::string::npos) {
    try {
      atoms = std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw InputError("bad atom count in '" + spec + "'");
    }
  }
  if (shape == "normal") return noise_law(NoiseShape::Normal, atoms);
  if (shape == "uniform") return noise_law(NoiseShape::Uniform, atoms);
  if (shape == "exp") return noise_law(NoiseShape::ShiftedExponential, atoms);
  throw InputError("unknown law '" + shape + "' (normal, uniform, exp)");
}

int cmd_additive(const Options& o, const std::string& f_spec, const std::string& eps_spec,
                 const std::vector<double>& sigmas, std::ostream& out) {
  const auto results = additive_error_verify(parse_law(f_spec), parse_law(eps_spec), sigmas, o.levels, o.tol);
  json pairs = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    ok = ok && (results[i].verdict == Verdict::LessEq || results[i].verdict == Verdict::Equal);
    pairs.push_back({{"sigma", sigmas[i]}, {"sigma_next", sigmas[i + 1]},
                     {"verdict_next_vs_this", to_string(results[i].verdict)}});
  }
  if (o.format == "csv") {
    out << "sigma,sigma_next,verdict\n";
    for (const auto& p : pairs)
      out << fmt(p["sigma"]) << ',' << fmt(p["sigma_next"]) << ',' << p["verdict_next_vs_this"].get<std::string>()
          << '\n';
    return kOk;
  }
  emit(out, {{"f", f_spec}, {"eps", eps_spec}, {"levels", o.levels}, {"pairs", pairs}, {"ordering_holds", ok}});
  return kOk;
}

int cmd_plotdata(const Options& o, const std::vector<std::string>& sources, std::ostream& out) {
  out << "model,v,x,integral\n";
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const auto m = load_model(sources[s], source_options(o));
    for (Eigen::Index j = 0; j + 1 < m.levels(); ++j) {
      const auto r = decreasing_rearrangement(m.level_function(j));
      const auto c = cumulative_integral(r);
      for (Eigen::Index k = 0; k < c.size(); ++k)
        out << s << ',' << fmt(m.y().cdf_values()(j)) << ',' << fmt(r.breaks()(k)) << ',' << fmt(c(k)) << '\n';
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional convex order, SI reduction and dependence measures for finite models", "depord"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  if (const char* env = std::getenv("DEPORD_THREADS")) {
    try {
      o.threads = static_cast<unsigned>(std::max(1, std::stoi(env)));
    } catch (const std::exception&) {
      err << "ignoring non-numeric DEPORD_THREADS\n";
    }
  }
  app.add_option("--tol", o.tol, "comparison tolerance")->check(CLI::PositiveNumber);
  app.add_option("--grid", o.grid, "cells for CSV ingestion and Gaussian discretization")->check(CLI::PositiveNumber);
  app.add_option("--levels", o.levels, "Y levels (Gaussian, additive)")->check(CLI::Range(2, 100000));
  app.add_option("--seed", o.seed, "seed for Monte Carlo discretization");
  app.add_option("--mc", o.mc, "Monte Carlo samples for Gaussian discretization (0 = exact)");
  app.add_option("--phi", o.phi, "square | abs | power:K | pl:breaks|slopes");
  app.add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", o.threads, "worker threads (default DEPORD_THREADS or 1)")->check(CLI::PositiveNumber);

  std::string a_src, b_src, b_opt;
  auto* compare = app.add_subcommand("compare", "decide A <=ccx B");
  compare->add_option("a", a_src)->required();
  compare->add_option("b", b_src)->required();
  compare->add_option("--engine", o.engine)->check(CLI::IsMember({"schur", "concordance", "brute", "all"}));

  std::string m_src;
  auto* measure = app.add_subcommand("measure", "dependence measures of one model");
  measure->add_option("model", m_src)->required();
  measure->add_option("--measure", o.measure)
      ->check(CLI::IsMember({"xi", "xi-phi", "lambda-phi", "nu", "rho-rearranged", "tau-rearranged",
                             "gamma-rearranged", "all"}));

  std::string r_src;
  auto* reduce = app.add_subcommand("reduce", "reduce a model to its bivariate SI grid");
  reduce->add_option("model", r_src)->required();

  std::string ba, bb;
  auto* bern = app.add_subcommand("bernoulli", "classify / compare bivariate Bernoulli models (p,q,alpha,beta)");
  bern->add_option("a", ba)->required();
  bern->add_option("b", bb);

  std::string ga, gb;
  auto* gauss = app.add_subcommand("gaussian", "explained-variance ratio and ccx for Gaussian specs");
  gauss->add_option("a", ga)->required()->check(CLI::ExistingFile);
  gauss->add_option("b", gb)->check(CLI::ExistingFile);

  std::string f_spec = "normal:41", eps_spec = "normal:41";
  std::vector<double> sigmas = {0.25, 0.5, 1.0, 2.0};
  auto* add = app.add_subcommand("simulate-additive", "check Y = f(X) + sigma*eps orderings across sigmas");
  add->add_option("--f", f_spec, "law of f(X): normal|uniform|exp[:atoms]");
  add->add_option("--eps", eps_spec, "law of eps: normal|uniform|exp[:atoms]");
  add->add_option("--sigmas", sigmas, "ascending noise scales")->delimiter(',');

  std::vector<std::string> plot_srcs;
  auto* plot = app.add_subcommand("plotdata", "integrated decreasing rearrangement curves per level (CSV)");
  plot->add_option("models", plot_srcs)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*compare) return cmd_compare(o, a_src, b_src, out);
    if (*measure) return cmd_measure(o, m_src, out);
    if (*reduce) return cmd_reduce(o, r_src, out);
    if (*bern) return cmd_bernoulli(o, ba, bb, out);
    if (*gauss) return cmd_gaussian(o, ga, gb, out);
    if (*add) return cmd_additive(o, f_spec, eps_spec, sigmas, out);
    if (*plot) return cmd_plotdata(o, plot_srcs, out);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DegenerateError& e) {
    err << "degenerate: " << e.what() << '\n';
    return kDegenerate;
  } catch (const std::domain_error& e) {
    err << "degenerate: " << e.what() << '\n';
    return kDegenerate;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace depord::cli
