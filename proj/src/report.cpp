#include "causalts/report.hpp"

#include "causalts/dot.hpp"
#include "causalts/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace causalts {

using nlohmann::json;

namespace {

std::string num(double v, int decimals = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string level_key(double level) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", level);
  return buf;
}

const char* bound_name(PValueBound b) {
  switch (b) {
    case PValueBound::Exact: return "exact";
    case PValueBound::AtMost: return "at_most";
    case PValueBound::AtLeast: return "at_least";
  }
  return "exact";
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json bool_matrix_to_json(const BoolMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(static_cast<bool>(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrices_to_json(const std::vector<Eigen::MatrixXd>& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(matrix_to_json(m));
  return a;
}

json trace_to_json(const TraceTestResult& t) {
  json tests = json::array();
  for (const auto& r : t.tests) tests.push_back(test_to_json(r));
  return {{"const_in_space", t.const_in_space},
          {"eigenvalues", vector_to_json(t.eigenvalues)},
          {"tests", tests}};
}

json config_to_json(const AnalysisConfig& c) {
  const PipelineConfig& p = c.pipeline;
  json transforms = json::object();
  for (const auto& [name, steps] : c.transforms) {
    json list = json::array();
    for (const auto& s : steps) list.push_back(to_string(s));
    transforms[name] = list;
  }
  return {
      {"input", c.input.filename().string()},
      {"time_column", c.time_column},
      {"endogenous", c.endogenous},
      {"exogenous", c.exogenous},
      {"transforms", transforms},
      {"season_period", c.season_period},
      {"season_harmonics", c.season_harmonics},
      {"standardize", c.standardize},
      {"lag_order", p.lag_order ? json(*p.lag_order) : json("auto")},
      {"max_lag", p.max_lag},
      {"lag_criterion", p.lag_criterion},
      {"rank", p.rank ? json(*p.rank) : json("auto")},
      {"rank_level", p.rank_level},
      {"constant", to_string(p.constant)},
      {"model", to_string(p.model)},
      {"bootstrap", p.bootstrap},
      {"prune_level", p.prune_level},
      {"bonferroni", p.bonferroni},
      {"lag_quantile", p.lag_quantile},
      {"contrast", to_string(p.contrast)},
      {"seed", p.seed},
      {"identifiability_level", p.identifiability_level},
      {"irf_horizon", p.irf_horizon},
      {"irf_ordering", c.irf_ordering.empty() ? json("lingam") : json(c.irf_ordering)},
  };
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  if (!out) throw InputError("failed while writing " + path.string());
}

void matrix_block(std::ostringstream& os, const Eigen::MatrixXd& m,
                  const std::vector<std::string>& rows, const std::vector<std::string>& cols) {
  std::size_t width = 10;
  for (const auto& s : rows) width = std::max(width, s.size() + 2);
  for (const auto& s : cols) width = std::max(width, s.size() + 2);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(width), "");
  os << buf;
  for (const auto& c : cols) {
    std::snprintf(buf, sizeof buf, "%*s", static_cast<int>(width), c.c_str());
    os << buf;
  }
  os << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::snprintf(buf, sizeof buf, "%-*s", static_cast<int>(width), rows[i].c_str());
    os << buf;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%*s", static_cast<int>(width), num(m(i, j)).c_str());
      os << buf;
    }
    os << '\n';
  }
}

void test_line(std::ostringstream& os, const std::string& label, const HypothesisTestResult& r) {
  os << "  " << label << ": stat " << num(r.statistic);
  if (r.p_value) {
    os << ", p " << (r.p_bound == PValueBound::AtMost ? "<= " : r.p_bound == PValueBound::AtLeast ? ">= " : "")
       << num(*r.p_value);
  }
  if (r.df) os << ", df " << *r.df;
  os << ", reject 5%: " << (r.rejects(0.05) ? "yes" : "no") << '\n';
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array()) throw InputError("expected a matrix (array of rows)");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != cols) {
      throw InputError("ragged matrix in report");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

json test_to_json(const HypothesisTestResult& r) {
  json crit = json::object();
  for (const auto& [level, value] : r.critical_values) crit[level_key(level)] = value;
  json reject = json::object();
  for (const auto& [level, value] : r.reject_at) reject[level_key(level)] = value;
  return {{"name", r.name},
          {"null_hypothesis", r.null_hypothesis},
          {"statistic", r.statistic},
          {"p_value", r.p_value ? json(*r.p_value) : json(nullptr)},
          {"p_bound", bound_name(r.p_bound)},
          {"df", r.df ? json(*r.df) : json(nullptr)},
          {"tail", r.tail == Tail::Upper ? "upper" : "lower"},
          {"critical_values", crit},
          {"reject_at", reject},
          {"note", r.note}};
}

json report_json(const PipelineResult& res, const AnalysisConfig& config) {
  json j;
  j["format"] = "causalts-report";
  j["version"] = 1;
  j["config"] = config_to_json(config);
  j["series"] = res.names;
  j["exogenous"] = config.exogenous;
  j["observations"] = res.samples;
  j["k"] = res.k;

  if (res.lag_table) {
    const auto& t = *res.lag_table;
    j["lag_selection"] = {{"max_lag", t.max_lag},
                          {"aic", vector_to_json(t.aic)},
                          {"hq", vector_to_json(t.hq)},
                          {"sc", vector_to_json(t.sc)},
                          {"chosen", t.chosen}};
  }
  if (res.trace) j["trace_test"] = trace_to_json(*res.trace);
  if (res.trace_alternate) j["trace_test_alternate"] = trace_to_json(*res.trace_alternate);
  if (res.placement) {
    j["constant_placement"] = {{"inside_loss", res.placement->inside_loss},
                               {"outside_loss", res.placement->outside_loss},
                               {"chosen", res.placement->inside ? "inside" : "outside"}};
  }
  if (res.rank) {
    j["rank_selection"] = {
        {"rank", res.rank->rank},
        {"source", res.rank->source},
        {"schwarz_rank", res.rank->schwarz_rank ? json(*res.rank->schwarz_rank) : json(nullptr)},
        {"schwarz_losses", vector_to_json(res.rank->schwarz_losses)}};
  }
  j["model"] = to_string(res.model);
  if (res.vecm) {
    const VecmModel& v = *res.vecm;
    j["vecm"] = {{"rank", v.rank},
                 {"k", v.k},
                 {"const_in_space", v.const_in_space},
                 {"eigenvalues", vector_to_json(v.eigenvalues)},
                 {"alpha", matrix_to_json(v.alpha)},
                 {"beta", matrix_to_json(v.beta)},
                 {"Pi", matrix_to_json(v.Pi)},
                 {"Gamma", matrices_to_json(v.Gamma)},
                 {"mu", v.mu ? vector_to_json(*v.mu) : json(nullptr)},
                 {"gamma", matrix_to_json(v.gamma)},
                 {"log_likelihood", v.log_likelihood},
                 {"parameters", v.parameter_count()}};
  }
  if (res.restrictions) {
    const auto list = [](const std::vector<HypothesisTestResult>& rs) {
      json a = json::array();
      for (const auto& r : rs) a.push_back(test_to_json(r));
      return a;
    };
    j["restriction_tests"] = {{"weak_exogeneity", list(res.restrictions->weak_exogeneity)},
                              {"exclusion", list(res.restrictions->exclusion)},
                              {"unit_vector", list(res.restrictions->unit_vector)}};
  }
  j["var"] = {{"mu", vector_to_json(res.var.mu)},
              {"M", matrices_to_json(res.var.M)},
              {"gamma", matrix_to_json(res.var.gamma)},
              {"residual_covariance", matrix_to_json(res.var.residual_covariance())}};
  if (res.normality) {
    json per = json::array();
    for (const auto& r : res.normality->per_series) per.push_back(test_to_json(r));
    j["jarque_bera"] = {{"per_series", per},
                        {"multivariate", test_to_json(res.normality->multivariate)}};
  }
  j["identifiability_warning"] = res.identifiability_warning;
  j["ica"] = {{"mixing", matrix_to_json(res.ica.mixing)},
              {"unmixing", matrix_to_json(res.ica.unmixing)},
              {"iterations", res.ica.iterations},
              {"converged", res.ica.converged},
              {"negentropy", res.ica.negentropy}};
  json lingam = {{"B0_point", matrix_to_json(res.lingam_point.B0)},
                 {"B0_pruned", matrix_to_json(res.lingam_pruned.B0)},
                 {"causal_order", res.lingam_pruned.causal_order},
                 {"pruned", res.lingam_pruned.pruned}};
  if (res.lingam_pruned.pruned) {
    lingam["bootstrap_lower"] = matrix_to_json(res.prune.lower);
    lingam["bootstrap_upper"] = matrix_to_json(res.prune.upper);
    lingam["failed_replicates"] = res.prune.failed_replicates;
    lingam["edge_level"] = res.prune.edge_level;
  }
  j["lingam"] = lingam;
  const CausalStructure& s = res.structure;
  j["structure"] = {{"B_unthresholded", matrices_to_json(res.B_unthresholded)},
                    {"B", matrices_to_json(s.B)},
                    {"mu", vector_to_json(s.mu)},
                    {"gamma", matrix_to_json(s.gamma)},
                    {"order", s.order},
                    {"thresholds",
                     {{"n_boot", s.thresholds.n_boot},
                      {"prune_level", s.thresholds.prune_level},
                      {"bonferroni", s.thresholds.bonferroni},
                      {"lag_quantile", s.thresholds.lag_quantile},
                      {"lag_threshold", s.thresholds.lag_threshold}}}};
  j["granger"] = {{"classical", bool_matrix_to_json(res.granger_classical.cause_effect)},
                  {"combined", bool_matrix_to_json(res.granger_combined.cause_effect)},
                  {"self_lags", res.granger_classical.self_lags}};
  j["irf"] = {{"horizon", res.irf.horizon()},
              {"impact", matrix_to_json(res.irf.impact)},
              {"spectral_radius", res.irf.spectral_radius},
              {"explosive", res.irf.explosive}};
  j["warnings"] = res.warnings;
  j["notes"] = res.notes;
  return j;
}

std::string irf_csv(const ImpulseResponse& irf, const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "impulse,response,horizon,value\n";
  char buf[32];
  const auto n = static_cast<Eigen::Index>(names.size());
  for (Eigen::Index shock = 0; shock < n; ++shock) {
    for (Eigen::Index resp = 0; resp < n; ++resp) {
      for (std::size_t h = 0; h < irf.responses.size(); ++h) {
        const auto r = std::to_chars(buf, buf + sizeof buf, irf.responses[h](resp, shock));
        os << names[shock] << ',' << names[resp] << ',' << h << ','
           << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf)) << '\n';
      }
    }
  }
  return os.str();
}

std::string summary_text(const PipelineResult& res) {
  std::ostringstream os;
  const auto& names = res.names;
  os << "Observations: " << res.samples << ", series: " << names.size() << ", lag order k = "
     << res.k << "\n\n";

  if (res.lag_table) {
    const auto& t = *res.lag_table;
    os << "Lag order selection\n  lag        AIC         HQ         SC\n";
    for (int i = 0; i < t.max_lag; ++i) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "  %3d %10s %10s %10s\n", i + 1, num(t.aic(i)).c_str(),
                    num(t.hq(i)).c_str(), num(t.sc(i)).c_str());
      os << buf;
    }
    os << "  chosen: AIC " << t.chosen.at("aic") << ", HQ " << t.chosen.at("hq") << ", SC "
       << t.chosen.at("sc") << "\n\n";
  }

  if (res.trace) {
    os << "Johansen trace test (constant " << (res.trace->const_in_space ? "inside" : "outside")
       << " the cointegration space)\n";
    os << "  null      eigenvalue   statistic      10%       5%       1%\n";
    for (std::size_t j = 0; j < res.trace->tests.size(); ++j) {
      const auto& t = res.trace->tests[j];
      char buf[160];
      std::snprintf(buf, sizeof buf, "  r <= %-3zu %11s %11s %8s %8s %8s\n", j,
                    num(res.trace->eigenvalues(static_cast<Eigen::Index>(j))).c_str(),
                    num(t.statistic).c_str(), num(t.critical_values.at(0.10), 2).c_str(),
                    num(t.critical_values.at(0.05), 2).c_str(),
                    num(t.critical_values.at(0.01), 2).c_str());
      os << buf;
    }
    os << '\n';
  }
  if (res.placement) {
    os << "Schwarz loss: constant inside " << num(res.placement->inside_loss, 2)
       << ", outside " << num(res.placement->outside_loss, 2) << " -> "
       << (res.placement->inside ? "inside" : "outside") << "\n\n";
  }
  if (res.rank) {
    os << "Cointegration rank: " << res.rank->rank << " (" << res.rank->source << ")\n\n";
  }

  if (res.restrictions) {
    os << "Restriction tests (LR)\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
      test_line(os, "weak exogeneity of " + names[i], res.restrictions->weak_exogeneity[i]);
    }
    for (std::size_t i = 0; i < res.restrictions->exclusion.size(); ++i) {
      const std::string label = i < names.size() ? names[i] : std::string("constant");
      test_line(os, "exclusion of " + label, res.restrictions->exclusion[i]);
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
      test_line(os, "stationarity of " + names[i], res.restrictions->unit_vector[i]);
    }
    os << '\n';
  }

  if (res.normality) {
    os << "Jarque-Bera residual normality\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
      test_line(os, names[i], res.normality->per_series[i]);
    }
    test_line(os, "joint", res.normality->multivariate);
    os << '\n';
  }

  os << "Causal order: ";
  for (std::size_t i = 0; i < res.structure.order.size(); ++i) {
    os << (i ? " -> " : "") << names[static_cast<std::size_t>(res.structure.order[i])];
  }
  os << "\n\n";
  for (std::size_t tau = 0; tau < res.structure.B.size(); ++tau) {
    os << "B" << tau << (tau == 0 ? " (instantaneous, pruned)" : " (thresholded)")
       << ", row = effect, column = cause\n";
    matrix_block(os, res.structure.B[tau], names, names);
    os << '\n';
  }
  os << "Lag threshold |B| >= " << num(res.structure.thresholds.lag_threshold) << " ("
     << num(res.structure.thresholds.lag_quantile, 2) << " quantile of |B1|)\n\n";

  if (!res.warnings.empty()) {
    os << "Warnings\n";
    for (const auto& w : res.warnings) os << "  - " << w << '\n';
    os << '\n';
  }
  if (!res.notes.empty()) {
    os << "Notes\n";
    for (const auto& n : res.notes) os << "  - " << n << '\n';
  }
  return os.str();
}

std::vector<std::filesystem::path> emit_report(const PipelineResult& res,
                                               const AnalysisConfig& config,
                                               const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw InputError("cannot create output directory " + out_dir.string());
  }
  std::vector<std::filesystem::path> written;
  const auto put = [&](const std::string& name, const std::string& content) {
    const auto path = out_dir / name;
    write_file(path, content);
    written.push_back(path);
  };
  put("report.json", report_json(res, config).dump(2) + "\n");
  put("irf.csv", irf_csv(res.irf, res.names));
  for (std::size_t tau = 0; tau < res.structure.B.size(); ++tau) {
    const auto g = digraph_from_matrix(res.structure.B[tau], res.names, static_cast<int>(tau));
    put("b" + std::to_string(tau) + ".dot", to_dot(g, "B" + std::to_string(tau)));
  }
  put("summary.txt", summary_text(res));
  return written;
}

ReportModel model_from_report(const json& j) {
  try {
    ReportModel m;
    m.names = j.at("series").get<std::vector<std::string>>();
    const json& v = j.at("var");
    const auto& mu = v.at("mu");
    m.var.mu.resize(static_cast<Eigen::Index>(mu.size()));
    for (std::size_t i = 0; i < mu.size(); ++i) m.var.mu(static_cast<Eigen::Index>(i)) = mu[i].get<double>();
    for (const auto& mt : v.at("M")) m.var.M.push_back(matrix_from_json(mt));
    m.var.gamma = matrix_from_json(v.at("gamma"));
    if (m.var.gamma.rows() == 0) m.var.gamma.resize(m.var.mu.size(), 0);
    m.covariance = matrix_from_json(v.at("residual_covariance"));
    m.B0 = matrix_from_json(j.at("structure").at("B").at(0));
    const auto n = static_cast<Eigen::Index>(m.names.size());
    if (m.var.mu.size() != n || m.covariance.rows() != n || m.B0.rows() != n) {
      throw InputError("report dimensions are inconsistent");
    }
    return m;
  } catch (const json::exception& e) {
    throw InputError(std::string("report is missing model fields: ") + e.what());
  }
}

ReportModel load_report_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read report " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("report " + path.string() + " is not valid JSON: " + e.what());
  }
  return model_from_report(j);
}

}  // namespace causalts
