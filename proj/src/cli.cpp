#include "causalts/cli.hpp"

#include "causalts/config.hpp"
#include "causalts/csv.hpp"
#include "causalts/error.hpp"
#include "causalts/linalg.hpp"
#include "causalts/pipeline.hpp"
#include "causalts/prep.hpp"
#include "causalts/report.hpp"
#include "causalts/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>

namespace causalts {
namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

int exit_code_for(const std::exception& e) {
  if (const auto* s = dynamic_cast<const StageError*>(&e)) {
    return s->category() == StageError::Category::Input ? kExitInputError
                                                         : kExitNumericalFailure;
  }
  if (dynamic_cast<const EstimationError*>(&e)) return kExitNumericalFailure;
  if (dynamic_cast<const Error*>(&e)) return kExitInputError;
  return kExitNumericalFailure;
}

void print_test(std::ostream& out, const std::string& label, const HypothesisTestResult& r) {
  out << label << "  " << r.name << "  stat=" << num(r.statistic);
  if (r.p_value) {
    out << "  p" << (r.p_bound == PValueBound::AtMost    ? "<="
                     : r.p_bound == PValueBound::AtLeast ? ">="
                                                         : "=")
        << num(*r.p_value);
  }
  if (r.df) out << "  df=" << *r.df;
  for (const auto& [level, cv] : r.critical_values) out << "  cv" << num(level) << "=" << num(cv);
  out << "  reject5%=" << (r.rejects(0.05) ? "yes" : "no") << '\n';
}

struct AnalyzeArgs {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

int run_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  AnalysisConfig config = load_config(a.config);
  if (a.seed) config.pipeline.seed = *a.seed;
  const IngestedData data = ingest_csv(config.input, config);
  for (const auto& name : config.irf_ordering) {
    const int idx = data.endog.find(name);
    if (idx < 0) throw InputError("irf_ordering names unknown series '" + name + "'");
    config.pipeline.irf_order.push_back(idx);
  }
  const PipelineResult result = run_pipeline(data.endog, data.exog_values(), config.pipeline);
  const auto dir = resolve_output_dir(
      config, a.out ? std::optional<std::filesystem::path>(*a.out) : std::nullopt);
  const auto files = emit_report(result, config, dir);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  out << "wrote " << files.size() << " files to " << dir.string() << '\n';
  if (a.strict && result.identifiability_warning) {
    err << "error: non-identifiability warning escalated by --strict\n";
    return kExitIdentifiability;
  }
  return kExitOk;
}

struct TestArgs {
  std::string name;
  std::string config;
  std::vector<std::string> series;
  std::optional<int> lags;
  std::optional<int> rank;
  std::optional<std::string> constant;
  bool difference = false;
  bool json = false;
};

int run_test(const TestArgs& a, std::ostream& out) {
  const AnalysisConfig config = load_config(a.config);
  const IngestedData data = ingest_csv(config.input, config);
  const Eigen::MatrixXd x = data.endog.values();
  const Eigen::MatrixXd z = data.exog_values();
  const PipelineConfig& p = config.pipeline;
  std::vector<std::pair<std::string, HypothesisTestResult>> results;

  const auto series_indices = [&] {
    std::vector<int> idx;
    if (a.series.empty()) {
      for (int i = 0; i < x.cols(); ++i) idx.push_back(i);
    }
    for (const auto& s : a.series) {
      const int i = data.endog.find(s);
      if (i < 0) throw InputError("unknown series '" + s + "'");
      idx.push_back(i);
    }
    return idx;
  };
  const auto lag_order = [&] {
    if (a.lags) return *a.lags;
    if (p.lag_order) return *p.lag_order;
    return select_lag_order(x, z, p.max_lag).chosen.at(p.lag_criterion);
  };
  const auto inside = [&] {
    const std::string c = a.constant.value_or(to_string(p.constant));
    return parse_constant_mode(c) != ConstantMode::Outside;
  };
  const auto fitted = [&] {
    const int k = lag_order();
    const bool in = inside();
    int r = 0;
    if (a.rank) {
      r = *a.rank;
    } else if (p.rank) {
      r = *p.rank;
    } else {
      r = select_rank(johansen_trace_test(x, z, k, in), p.rank_level);
    }
    return fit_vecm(x, z, k, r, in);
  };

  if (a.name == "pp" || a.name == "kpss") {
    for (int i : series_indices()) {
      Eigen::VectorXd s = x.col(i);
      if (a.difference) s = (s.tail(s.size() - 1) - s.head(s.size() - 1)).eval();
      results.emplace_back(data.endog.names()[i],
                           a.name == "pp" ? phillips_perron(s) : kpss(s));
    }
  } else if (a.name == "lagselect") {
    const auto t = select_lag_order(x, z, p.max_lag);
    if (a.json) {
      nlohmann::json j = {{"aic", std::vector<double>(t.aic.data(), t.aic.data() + t.aic.size())},
                          {"hq", std::vector<double>(t.hq.data(), t.hq.data() + t.hq.size())},
                          {"sc", std::vector<double>(t.sc.data(), t.sc.data() + t.sc.size())},
                          {"chosen", t.chosen}};
      out << j.dump(2) << '\n';
      return kExitOk;
    }
    out << "lag        AIC         HQ         SC\n";
    for (int l = 0; l < t.max_lag; ++l) {
      out << l + 1 << "  " << num(t.aic(l)) << "  " << num(t.hq(l)) << "  " << num(t.sc(l)) << '\n';
    }
    out << "chosen: aic=" << t.chosen.at("aic") << " hq=" << t.chosen.at("hq")
        << " sc=" << t.chosen.at("sc") << '\n';
    return kExitOk;
  } else if (a.name == "trace") {
    const auto t = johansen_trace_test(x, z, lag_order(), inside());
    for (std::size_t j = 0; j < t.tests.size(); ++j) {
      results.emplace_back("r<=" + std::to_string(j) + " eig=" + num(t.eigenvalues(static_cast<Eigen::Index>(j))),
                           t.tests[j]);
    }
  } else if (a.name == "jb") {
    const auto model = fitted();
    const auto jb = jarque_bera(residuals_from_var(vecm_to_var(model), x, z));
    for (std::size_t i = 0; i < jb.per_series.size(); ++i) {
      results.emplace_back(data.endog.names()[i], jb.per_series[i]);
    }
    results.emplace_back("joint", jb.multivariate);
  } else if (a.name == "exo" || a.name == "excl" || a.name == "unitvec") {
    const auto model = fitted();
    std::vector<int> idx = series_indices();
    if (a.name == "excl" && model.const_in_space && a.series.empty()) {
      idx.push_back(static_cast<int>(model.dim()));
    }
    for (int i : idx) {
      const std::string label =
          i < static_cast<int>(model.dim()) ? data.endog.names()[i] : std::string("constant");
      if (a.name == "exo") results.emplace_back(label, weak_exogeneity_test(model, i));
      if (a.name == "excl") results.emplace_back(label, exclusion_test(model, i));
      if (a.name == "unitvec") results.emplace_back(label, unit_vector_cointegration_test(model, i));
    }
  } else {
    throw InputError("unknown test '" + a.name +
                     "' (pp, kpss, trace, lagselect, jb, exo, excl, unitvec)");
  }

  if (a.json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [label, r] : results) {
      auto j = test_to_json(r);
      j["label"] = label;
      arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
  } else {
    for (const auto& [label, r] : results) print_test(out, label, r);
  }
  return kExitOk;
}

struct GenerateArgs {
  std::string kind = "svar";
  int n = 4;
  int T = 500;
  int lags = 1;
  int rank = 1;
  double density = 0.3;
  std::uint64_t seed = 0;
  std::string noise = "uniform";
  double df = 5.0;
  int exog = 0;
  std::string out;
  std::optional<std::string> truth;
};

int run_generate(const GenerateArgs& a, std::ostream& out) {
  NoiseSpec noise{parse_noise_family(a.noise), a.df};
  nlohmann::json truth;
  TimeSeriesMatrix endog;
  Eigen::MatrixXd exog;
  if (a.kind == "svar") {
    GeneratorSpec spec;
    spec.n = a.n;
    spec.T = a.T;
    spec.seed = a.seed;
    spec.noise = noise;
    spec.exog.d = a.exog;
    spec.B0 = random_dag(a.n, a.density, a.seed);
    std::mt19937_64 rng(a.seed ^ 0x5DEECE66DULL);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int tau = 0; tau < a.lags; ++tau) {
      Eigen::MatrixXd m = Eigen::MatrixXd::NullaryExpr(a.n, a.n, [&] { return u(rng); });
      spec.M.push_back(m / static_cast<double>(a.lags));
    }
    VarModel probe;
    probe.M = spec.M;
    probe.mu = Eigen::VectorXd::Zero(a.n);
    const double radius = spectral_radius(probe.companion());
    if (radius > 0.8) {
      for (auto& m : spec.M) m *= 0.8 / radius;
    }
    if (a.exog > 0) spec.gamma = Eigen::MatrixXd::Constant(a.n, a.exog, 0.5);
    const SvarSample s = generate_svar(spec);
    endog = s.endog;
    exog = s.exog;
    std::vector<Eigen::MatrixXd> b = s.truth.B;
    nlohmann::json bs = nlohmann::json::array();
    for (const auto& m : b) bs.push_back(matrix_to_json(m));
    truth = {{"kind", "svar"}, {"B", bs}, {"order", s.truth.order}};
  } else if (a.kind == "coint") {
    CointegrationSpec spec = default_cointegration_spec(a.n, a.rank, a.T, a.seed);
    spec.noise = noise;
    spec.exog.d = a.exog;
    const CointegratedSample s = generate_cointegrated(spec);
    endog = s.endog;
    exog = s.exog;
    truth = {{"kind", "coint"},
             {"rank", a.rank},
             {"alpha", matrix_to_json(s.truth.alpha)},
             {"beta", matrix_to_json(s.truth.beta)}};
  } else {
    throw InputError("generate --kind must be svar or coint");
  }
  std::vector<std::string> names = endog.names();
  Eigen::MatrixXd all(endog.rows(), endog.cols() + exog.cols());
  all << endog.values(), exog;
  for (int j = 0; j < exog.cols(); ++j) names.push_back("z" + std::to_string(j + 1));
  std::ofstream f(a.out, std::ios::binary);
  if (!f) throw InputError("cannot write " + a.out);
  f << to_csv(all, names);
  if (a.truth) {
    std::ofstream t(*a.truth, std::ios::binary);
    if (!t) throw InputError("cannot write " + *a.truth);
    t << truth.dump(2) << '\n';
  }
  out << "wrote " << endog.rows() << " rows to " << a.out << '\n';
  return kExitOk;
}

struct IrfArgs {
  std::string report;
  int horizon = 10;
  std::vector<std::string> ordering;
  std::optional<std::string> out;
};

int run_irf(const IrfArgs& a, std::ostream& out) {
  const ReportModel m = load_report_model(a.report);
  const auto n = static_cast<Eigen::Index>(m.names.size());
  Eigen::MatrixXd impact;
  if (a.ordering.empty()) {
    impact = structural_impact(m.covariance, Eigen::MatrixXd::Identity(n, n) - m.B0);
  } else {
    std::vector<int> order;
    for (const auto& s : a.ordering) {
      const auto it = std::find(m.names.begin(), m.names.end(), s);
      if (it == m.names.end()) throw InputError("unknown series '" + s + "' in --ordering");
      order.push_back(static_cast<int>(it - m.names.begin()));
    }
    if (static_cast<Eigen::Index>(order.size()) != n) {
      throw InputError("--ordering must list every series once");
    }
    impact = recursive_impact(m.covariance, order);
  }
  const ImpulseResponse irf = impulse_response(m.var, impact, a.horizon);
  const std::string csv = irf_csv(irf, m.names);
  if (a.out) {
    std::ofstream f(*a.out, std::ios::binary);
    if (!f) throw InputError("cannot write " + *a.out);
    f << csv;
  } else {
    out << csv;
  }
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal structure of cointegrated time series"};
  app.require_subcommand(1);

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "run the full pipeline from a config file");
  analyze->add_option("--config,-c", aa.config, "YAML config")->required();
  analyze->add_option("--out,-o", aa.out, "output directory");
  analyze->add_option("--seed", aa.seed, "override the configured seed");
  analyze->add_flag("--strict", aa.strict, "exit 3 on the non-identifiability warning");

  TestArgs ta;
  auto* test = app.add_subcommand("test", "run one family of tests");
  test->add_option("name", ta.name, "pp | kpss | trace | lagselect | jb | exo | excl | unitvec")
      ->required();
  test->add_option("--config,-c", ta.config, "YAML config")->required();
  test->add_option("--series", ta.series, "restrict to these series");
  test->add_option("--lags", ta.lags, "VAR lag order k");
  test->add_option("--rank", ta.rank, "cointegration rank");
  test->add_option("--constant", ta.constant, "inside | outside");
  test->add_flag("--difference", ta.difference, "test first differences (pp, kpss)");
  test->add_flag("--json", ta.json, "JSON output");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "simulate a synthetic dataset");
  gen->add_option("--kind", ga.kind, "svar | coint");
  gen->add_option("--n", ga.n, "number of series");
  gen->add_option("--T", ga.T, "observations");
  gen->add_option("--lags", ga.lags, "VAR lag order (svar)");
  gen->add_option("--rank", ga.rank, "cointegration rank (coint)");
  gen->add_option("--density", ga.density, "edge probability of B0 (svar)");
  gen->add_option("--seed", ga.seed, "random seed");
  gen->add_option("--noise", ga.noise, "uniform | laplace | student_t | gaussian");
  gen->add_option("--df", ga.df, "student-t degrees of freedom");
  gen->add_option("--exog", ga.exog, "number of exogenous AR(1) regressors");
  gen->add_option("--out,-o", ga.out, "CSV path")->required();
  gen->add_option("--truth", ga.truth, "write the generating structure as JSON");

  IrfArgs ia;
  auto* irf = app.add_subcommand("irf", "impulse responses from a report.json");
  irf->add_option("--report,-r", ia.report, "report.json written by analyze")->required();
  irf->add_option("--horizon", ia.horizon, "maximum horizon");
  irf->add_option("--ordering", ia.ordering, "recursive ordering (default: estimated B0)");
  irf->add_option("--out,-o", ia.out, "CSV path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (*analyze) return run_analyze(aa, out, err);
    if (*test) return run_test(ta, out);
    if (*gen) return run_generate(ga, out);
    if (*irf) return run_irf(ia, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitInputError;
}

}  // namespace causalts
