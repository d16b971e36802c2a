#include "causalts/config.hpp"

#include "causalts/error.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace causalts {
namespace {

const std::set<std::string> kKeys{
    "input",        "time_column",  "endogenous",    "exogenous",
    "transforms",   "season_period", "season_harmonics", "standardize",
    "lag_order",    "max_lag",      "lag_criterion", "rank",
    "rank_level",   "constant",     "model",         "restriction_tests",
    "bootstrap",    "prune_level",  "bonferroni",    "lag_quantile",
    "contrast",     "seed",         "threads",       "identifiability_level",
    "irf_horizon",  "irf_ordering", "output_dir"};

template <class T>
T as(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw InputError("config key '" + key + "' has an invalid value");
  }
}

std::vector<std::string> string_list(const YAML::Node& node, const std::string& key) {
  if (node.IsScalar()) return {as<std::string>(node, key)};
  if (!node.IsSequence()) throw InputError("config key '" + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& item : node) out.push_back(as<std::string>(item, key));
  return out;
}

// Integer or the word "auto".
std::optional<int> int_or_auto(const YAML::Node& node, const std::string& key) {
  const auto text = as<std::string>(node, key);
  if (text == "auto") return std::nullopt;
  return as<int>(node, key);
}

}  // namespace

TransformStep parse_transform_step(const std::string& spec) {
  static const std::regex logit_re(
      R"(\s*logit\s*(?:\(\s*([-+0-9.eE]+)\s*,\s*([-+0-9.eE]+)\s*\))?\s*)");
  TransformStep step;
  std::smatch m;
  if (spec == "log") {
    step.kind = TransformStep::Kind::Log;
  } else if (spec == "deseasonalize") {
    step.kind = TransformStep::Kind::Deseasonalize;
  } else if (std::regex_match(spec, m, logit_re)) {
    step.kind = TransformStep::Kind::Logit;
    if (m[1].matched) {
      step.lower = std::stod(m[1].str());
      step.upper = std::stod(m[2].str());
      if (!(step.lower < step.upper)) throw InputError("logit bounds must satisfy lower < upper");
    }
  } else {
    throw InputError("unknown transform '" + spec + "' (log, logit, logit(a,b), deseasonalize)");
  }
  return step;
}

std::string to_string(const TransformStep& step) {
  switch (step.kind) {
    case TransformStep::Kind::Log: return "log";
    case TransformStep::Kind::Deseasonalize: return "deseasonalize";
    case TransformStep::Kind::Logit: {
      std::ostringstream os;
      os << "logit(" << step.lower << "," << step.upper << ")";
      return os.str();
    }
  }
  return "?";
}

AnalysisConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("malformed config: ") + e.what());
  }
  if (!root.IsMap()) throw InputError("config must be a mapping of key: value lines");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!kKeys.count(key)) throw InputError("unknown config key '" + key + "'");
  }

  AnalysisConfig c;
  PipelineConfig& p = c.pipeline;
  if (!root["input"]) throw InputError("config needs an 'input' CSV path");
  c.input = as<std::string>(root["input"], "input");
  if (c.input.is_relative() && !base_dir.empty()) c.input = base_dir / c.input;
  if (root["time_column"]) c.time_column = as<std::string>(root["time_column"], "time_column");
  if (!root["endogenous"]) throw InputError("config needs an 'endogenous' list");
  c.endogenous = string_list(root["endogenous"], "endogenous");
  if (c.endogenous.empty()) throw InputError("'endogenous' must name at least one column");
  if (root["exogenous"]) c.exogenous = string_list(root["exogenous"], "exogenous");

  std::set<std::string> seen;
  for (const auto& name : c.endogenous) {
    if (!seen.insert(name).second) throw InputError("column '" + name + "' listed twice");
  }
  for (const auto& name : c.exogenous) {
    if (!seen.insert(name).second) throw InputError("column '" + name + "' listed twice");
  }
  if (!c.time_column.empty() && seen.count(c.time_column)) {
    throw InputError("time column '" + c.time_column + "' is also listed as a series");
  }

  if (const auto t = root["transforms"]) {
    if (!t.IsMap()) throw InputError("'transforms' must map series names to transform lists");
    for (const auto& kv : t) {
      const auto name = kv.first.as<std::string>();
      if (!seen.count(name)) {
        throw InputError("transform given for '" + name + "', which is not a listed series");
      }
      std::vector<TransformStep> steps;
      for (const auto& s : string_list(kv.second, "transforms." + name)) {
        if (s == "none") continue;
        steps.push_back(parse_transform_step(s));
      }
      c.transforms[name] = std::move(steps);
    }
  }
  if (root["season_period"]) c.season_period = as<int>(root["season_period"], "season_period");
  if (root["season_harmonics"]) {
    c.season_harmonics = as<int>(root["season_harmonics"], "season_harmonics");
  }
  if (c.season_period < 2 || c.season_harmonics < 1) {
    throw InputError("season_period must be >= 2 and season_harmonics >= 1");
  }
  if (root["standardize"]) c.standardize = as<bool>(root["standardize"], "standardize");

  if (root["lag_order"]) p.lag_order = int_or_auto(root["lag_order"], "lag_order");
  if (root["max_lag"]) p.max_lag = as<int>(root["max_lag"], "max_lag");
  if (root["lag_criterion"]) p.lag_criterion = as<std::string>(root["lag_criterion"], "lag_criterion");
  if (p.lag_criterion != "aic" && p.lag_criterion != "hq" && p.lag_criterion != "sc") {
    throw InputError("lag_criterion must be aic, hq or sc");
  }
  if (root["rank"]) p.rank = int_or_auto(root["rank"], "rank");
  if (root["rank_level"]) p.rank_level = as<double>(root["rank_level"], "rank_level");
  if (p.rank_level != 0.10 && p.rank_level != 0.05 && p.rank_level != 0.01) {
    throw InputError("rank_level must be one of 0.10, 0.05, 0.01 (tabulated levels)");
  }
  if (root["constant"]) p.constant = parse_constant_mode(as<std::string>(root["constant"], "constant"));
  if (root["model"]) p.model = parse_model_kind(as<std::string>(root["model"], "model"));
  if (root["restriction_tests"]) {
    p.restriction_tests = as<bool>(root["restriction_tests"], "restriction_tests");
  }
  if (root["bootstrap"]) p.bootstrap = as<int>(root["bootstrap"], "bootstrap");
  if (root["prune_level"]) p.prune_level = as<double>(root["prune_level"], "prune_level");
  if (!(p.prune_level > 0.0 && p.prune_level < 1.0)) throw InputError("prune_level must lie in (0, 1)");
  if (root["bonferroni"]) p.bonferroni = as<bool>(root["bonferroni"], "bonferroni");
  if (root["lag_quantile"]) p.lag_quantile = as<double>(root["lag_quantile"], "lag_quantile");
  if (root["contrast"]) p.contrast = parse_contrast(as<std::string>(root["contrast"], "contrast"));
  if (root["seed"]) {
    p.seed = as<std::uint64_t>(root["seed"], "seed");
    c.seed_given = true;
  }
  if (root["threads"]) p.threads = as<int>(root["threads"], "threads");
  if (root["identifiability_level"]) {
    p.identifiability_level = as<double>(root["identifiability_level"], "identifiability_level");
  }
  if (root["irf_horizon"]) p.irf_horizon = as<int>(root["irf_horizon"], "irf_horizon");
  if (const auto o = root["irf_ordering"]) {
    if (!(o.IsScalar() && o.as<std::string>() == "lingam")) {
      c.irf_ordering = string_list(o, "irf_ordering");
    }
  }
  if (root["output_dir"]) c.output_dir = as<std::string>(root["output_dir"], "output_dir");

  // fastICA restarts are always drawn at random, so a seed is mandatory.
  if (!c.seed_given) throw InputError("config needs a 'seed' (ICA and bootstrap are randomized)");
  return c;
}

AnalysisConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::filesystem::path resolve_output_dir(const AnalysisConfig& config,
                                         const std::optional<std::filesystem::path>& flag) {
  if (flag) return *flag;
  if (config.output_dir) return *config.output_dir;
  if (const char* env = std::getenv("CAUSALTS_OUT_DIR"); env && *env) return env;
  return "causalts_out";
}

}  // namespace causalts
