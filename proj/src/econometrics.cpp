#include "causalts/econometrics.hpp"

#include "causalts/critical_values.hpp"
#include "causalts/error.hpp"
#include "causalts/linalg.hpp"
#include "causalts/var.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace causalts {
namespace {

double chi2_sf(double x, int df) {
  if (x <= 0.0) return 1.0;
  return boost::math::cdf(
      boost::math::complement(boost::math::chi_squared(df), x));
}

int argmin(const Eigen::VectorXd& v) {
  Eigen::Index i = 0;
  v.minCoeff(&i);
  return static_cast<int>(i);
}

void require_length(const Eigen::VectorXd& series, const char* test) {
  if (series.size() < 20) {
    throw SizeError(std::string(test) + " needs at least 20 observations, got " +
                    std::to_string(series.size()));
  }
  if (series.maxCoeff() == series.minCoeff()) {
    throw DegenerateInputError(std::string(test) +
                               " is undefined for a constant series");
  }
}

void require_vecm_index(const VecmModel& model, int series, Eigen::Index rows,
                        const char* test) {
  if (model.rank < 1 || model.rank >= model.dim()) {
    throw ContractError(std::string(test) + " needs 1 <= rank < n");
  }
  if (series < 0 || series >= rows) {
    throw ContractError(std::string(test) + ": series index " +
                        std::to_string(series) + " out of range [0, " +
                        std::to_string(rows) + ")");
  }
  if (model.moments.samples() == 0) {
    throw ContractError(std::string(test) +
                        " needs a model estimated by fit_vecm");
  }
}

double unrestricted_log_det(const VecmModel& model) {
  const auto& m = model.moments;
  double v = log_det_spd(m.s00);
  for (int i = 0; i < model.rank; ++i) v += std::log1p(-model.eigenvalues(i));
  return v;
}

HypothesisTestResult lr_result(std::string name, std::string null_hypothesis,
                               double lr, int df) {
  HypothesisTestResult r;
  r.name = std::move(name);
  r.null_hypothesis = std::move(null_hypothesis);
  // Restricted likelihood cannot exceed the unrestricted maximum; clamp the
  // round-off that can make the statistic a hair negative.
  r.statistic = std::max(lr, 0.0);
  r.df = df;
  r.p_value = chi2_sf(r.statistic, df);
  r.decide();
  return r;
}

Eigen::VectorXd unit(Eigen::Index size, Eigen::Index at) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(size);
  e(at) = 1.0;
  return e;
}

// log |S00.b| + sum_{i < r-1} log(1 - lambda*_i) for beta = (b, b_perp phi).
double known_vector_log_det(const JohansenMoments& m, const Eigen::VectorXd& b,
                            int rank) {
  const double bsb = b.dot(m.s11 * b);
  const Eigen::VectorXd s1b = m.s11 * b;
  const Eigen::VectorXd s0b = m.s01 * b;
  const Eigen::MatrixXd s00b = m.s00 - s0b * s0b.transpose() / bsb;
  const Eigen::MatrixXd s01b = m.s01 - s0b * s1b.transpose() / bsb;
  const Eigen::MatrixXd s11b = m.s11 - s1b * s1b.transpose() / bsb;
  double v = log_det_spd(s00b);
  if (rank > 1) {
    const Eigen::MatrixXd perp = orthogonal_complement(b);
    const auto sol = reduced_rank_eigen(s00b, s01b * perp,
                                        perp.transpose() * s11b * perp);
    for (int i = 0; i < rank - 1; ++i) v += std::log1p(-sol.eigenvalues(i));
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------

LagSelectionTable select_lag_order(const Eigen::MatrixXd& endog,
                                   const Eigen::MatrixXd& exog, int max_lag) {
  if (max_lag < 1) throw ContractError("max_lag must be at least 1");
  const Eigen::Index n = endog.cols();
  const Eigen::Index d = exog.cols();
  const Eigen::Index t = endog.rows();
  if (t <= max_lag * n + d + 1 || t - max_lag <= 1 + n * max_lag + d) {
    throw SizeError("lag selection up to " + std::to_string(max_lag) +
                    " needs more observations than " + std::to_string(t));
  }
  if (d > 0 && exog.rows() != t) {
    throw ContractError("exogenous panel row count differs from endogenous");
  }
  const double t_eff = static_cast<double>(t - max_lag);
  const Eigen::MatrixXd y = endog.bottomRows(t - max_lag);

  LagSelectionTable table;
  table.max_lag = max_lag;
  table.aic.resize(max_lag);
  table.hq.resize(max_lag);
  table.sc.resize(max_lag);
  for (int k = 1; k <= max_lag; ++k) {
    const Eigen::MatrixXd x = var_design(endog, exog, k, max_lag);
    const OlsFit fit = ols(x, y);
    const double ld = log_det_spd(moment(fit.residuals, fit.residuals));
    const double params = static_cast<double>(n * (1 + n * k + d));
    table.aic(k - 1) = ld + 2.0 * params / t_eff;
    table.hq(k - 1) = ld + 2.0 * std::log(std::log(t_eff)) * params / t_eff;
    table.sc(k - 1) = ld + std::log(t_eff) * params / t_eff;
  }
  table.chosen["aic"] = argmin(table.aic) + 1;
  table.chosen["hq"] = argmin(table.hq) + 1;
  table.chosen["sc"] = argmin(table.sc) + 1;
  return table;
}

// ---------------------------------------------------------------------------

int newey_west_lags(Eigen::Index length) {
  return static_cast<int>(
      std::floor(4.0 * std::pow(static_cast<double>(length) / 100.0, 2.0 / 9.0)));
}

double long_run_variance(const Eigen::VectorXd& u, int lags) {
  const Eigen::Index t = u.size();
  const double denom = static_cast<double>(t);
  double lrv = u.squaredNorm() / denom;
  for (int j = 1; j <= lags && j < t; ++j) {
    const double gamma_j = u.tail(t - j).dot(u.head(t - j)) / denom;
    lrv += 2.0 * (1.0 - static_cast<double>(j) / (lags + 1)) * gamma_j;
  }
  return lrv;
}

HypothesisTestResult phillips_perron(const Eigen::VectorXd& series,
                                     std::optional<int> lags) {
  require_length(series, "Phillips-Perron test");
  const Eigen::Index t = series.size();
  const Eigen::Index nobs = t - 1;
  const int l = lags.value_or(newey_west_lags(t));
  if (l < 0) throw ContractError("lag truncation must be nonnegative");

  Eigen::MatrixXd x(nobs, 2);
  x.col(0).setOnes();
  x.col(1) = series.head(nobs);
  const Eigen::VectorXd y = series.tail(nobs);
  const OlsFit fit = ols(x, y);
  const Eigen::VectorXd u = fit.residuals.col(0);
  const double rho = fit.coef(1, 0);

  const double ssr = u.squaredNorm();
  if (!(ssr > 0.0)) {
    throw DegenerateInputError("Phillips-Perron regression has zero residual variance");
  }
  const double s2 = ssr / static_cast<double>(nobs - 2);
  const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
  const double se = std::sqrt(s2 * xtx_inv(1, 1));
  const double t_rho = (rho - 1.0) / se;
  const double gamma0 = ssr / static_cast<double>(nobs);
  const double lambda2 = long_run_variance(u, l);
  const double lambda = std::sqrt(lambda2);
  const double z_tau = std::sqrt(gamma0 / lambda2) * t_rho -
                       0.5 * ((lambda2 - gamma0) / lambda) *
                           (static_cast<double>(nobs) * se / std::sqrt(s2));

  HypothesisTestResult r;
  r.name = "phillips_perron";
  r.null_hypothesis = "series has a unit root";
  r.statistic = z_tau;
  r.tail = Tail::Lower;
  r.p_value = mackinnon_pvalue(z_tau);
  for (double level : standard_levels()) {
    r.critical_values[level] = mackinnon_critical(level);
  }
  r.note = "constant, no trend; Bartlett lags = " + std::to_string(l);
  r.decide();
  return r;
}

HypothesisTestResult kpss(const Eigen::VectorXd& series, std::optional<int> lags) {
  require_length(series, "KPSS test");
  const Eigen::Index t = series.size();
  const int l = lags.value_or(newey_west_lags(t));
  if (l < 0) throw ContractError("lag truncation must be nonnegative");

  const Eigen::VectorXd e = (series.array() - series.mean()).matrix();
  double partial = 0.0;
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < t; ++i) {
    partial += e(i);
    sum_sq += partial * partial;
  }
  const double lambda2 = long_run_variance(e, l);
  const double td = static_cast<double>(t);
  const double eta = sum_sq / (td * td * lambda2);

  HypothesisTestResult r;
  r.name = "kpss";
  r.null_hypothesis = "series is level-stationary";
  r.statistic = eta;
  r.tail = Tail::Upper;
  for (std::size_t i = 0; i < kKpssLevels.size(); ++i) {
    if (kKpssLevels[i] != 0.025) r.critical_values[kKpssLevels[i]] = kKpssCritical[i];
  }
  if (eta <= kKpssCritical.front()) {
    r.p_value = kKpssLevels.front();
    r.p_bound = eta < kKpssCritical.front() ? PValueBound::AtLeast : PValueBound::Exact;
  } else if (eta >= kKpssCritical.back()) {
    r.p_value = kKpssLevels.back();
    r.p_bound = eta > kKpssCritical.back() ? PValueBound::AtMost : PValueBound::Exact;
  } else {
    for (std::size_t i = 0; i + 1 < kKpssCritical.size(); ++i) {
      if (eta <= kKpssCritical[i + 1]) {
        const double w = (eta - kKpssCritical[i]) /
                         (kKpssCritical[i + 1] - kKpssCritical[i]);
        r.p_value = kKpssLevels[i] + w * (kKpssLevels[i + 1] - kKpssLevels[i]);
        break;
      }
    }
  }
  r.note = "level stationarity; Bartlett lags = " + std::to_string(l);
  r.decide();
  return r;
}

// ---------------------------------------------------------------------------

TraceTestResult johansen_trace_test(const Eigen::MatrixXd& endog,
                                    const Eigen::MatrixXd& exog, int k,
                                    bool const_in_space) {
  const Eigen::Index n = endog.cols();
  if (n > trace_table_size(const_in_space)) {
    // Fail before estimation; the r = 0 row needs n common trends.
    trace_critical_values(static_cast<int>(n), const_in_space);
  }
  const JohansenEigen je = johansen_eigen(endog, exog, k, const_in_space);
  const double samples = static_cast<double>(je.moments.samples());

  TraceTestResult out;
  out.eigenvalues = je.eigenvalues;
  out.const_in_space = const_in_space;
  for (Eigen::Index j = 0; j < n; ++j) {
    double stat = 0.0;
    for (Eigen::Index i = j; i < n; ++i) stat -= samples * std::log1p(-je.eigenvalues(i));
    const auto crit =
        trace_critical_values(static_cast<int>(n - j), const_in_space);
    HypothesisTestResult r;
    r.name = "trace";
    r.null_hypothesis = j == 0 ? "r = 0" : "r <= " + std::to_string(j);
    r.statistic = stat;
    r.tail = Tail::Upper;
    r.critical_values = {{0.10, crit[0]}, {0.05, crit[1]}, {0.01, crit[2]}};
    r.note = const_in_space ? "constant inside the cointegration space"
                            : "constant outside the cointegration space";
    r.decide();
    out.tests.push_back(std::move(r));
  }
  return out;
}

int select_rank(const TraceTestResult& trace, double level) {
  for (std::size_t j = 0; j < trace.tests.size(); ++j) {
    if (!trace.tests[j].rejects(level)) return static_cast<int>(j);
  }
  return static_cast<int>(trace.tests.size());
}

// ---------------------------------------------------------------------------

double schwarz_loss(const VecmModel& model) {
  const double samples = static_cast<double>(model.residuals.rows());
  return -2.0 * model.log_likelihood +
         static_cast<double>(model.parameter_count()) * std::log(samples);
}

bool prefer_inside(double inside_loss, double outside_loss) {
  return !(outside_loss < inside_loss - 1e-9);
}

ConstantPlacement schwarz_constant_placement(const Eigen::MatrixXd& endog,
                                             const Eigen::MatrixXd& exog, int k,
                                             int rank) {
  ConstantPlacement out;
  out.inside_loss = schwarz_loss(fit_vecm(endog, exog, k, rank, true));
  out.outside_loss = schwarz_loss(fit_vecm(endog, exog, k, rank, false));
  out.inside = prefer_inside(out.inside_loss, out.outside_loss);
  return out;
}

// ---------------------------------------------------------------------------

JarqueBeraResult jarque_bera(const Eigen::MatrixXd& residuals) {
  const Eigen::Index t = residuals.rows();
  const Eigen::Index n = residuals.cols();
  if (t < 8) throw SizeError("Jarque-Bera needs at least 8 observations");
  const double td = static_cast<double>(t);
  const Eigen::MatrixXd centered =
      residuals.rowwise() - residuals.colwise().mean();

  JarqueBeraResult out;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::ArrayXd e = centered.col(j).array();
    const double m2 = e.square().sum() / td;
    if (!(m2 > 0.0)) {
      throw DegenerateInputError("Jarque-Bera: column " + std::to_string(j + 1) +
                                 " has zero variance");
    }
    const double skew = e.cube().sum() / td / std::pow(m2, 1.5);
    const double kurt = e.square().square().sum() / td / (m2 * m2);
    HypothesisTestResult r;
    r.name = "jarque_bera";
    r.null_hypothesis = "residual series " + std::to_string(j + 1) + " is normal";
    r.statistic = td / 6.0 * (skew * skew + (kurt - 3.0) * (kurt - 3.0) / 4.0);
    r.df = 2;
    r.p_value = chi2_sf(r.statistic, 2);
    r.decide();
    out.per_series.push_back(std::move(r));
  }

  const Eigen::MatrixXd cov = moment(centered, centered);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw DegenerateInputError("Jarque-Bera: residual covariance is singular");
  }
  // u_t = L^{-1} e_t
  const Eigen::MatrixXd u =
      llt.matrixL().solve(centered.transpose()).transpose();
  double skew_part = 0.0;
  double kurt_part = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::ArrayXd c = u.col(j).array();
    const double b1 = c.cube().sum() / td;
    const double b2 = c.square().square().sum() / td;
    skew_part += b1 * b1;
    kurt_part += (b2 - 3.0) * (b2 - 3.0);
  }
  HypothesisTestResult& mv = out.multivariate;
  mv.name = "jarque_bera_multivariate";
  mv.null_hypothesis = "residuals are jointly normal";
  mv.statistic = td / 6.0 * skew_part + td / 24.0 * kurt_part;
  mv.df = static_cast<int>(2 * n);
  mv.p_value = chi2_sf(mv.statistic, *mv.df);
  mv.note = "Cholesky-orthogonalized residuals";
  mv.decide();
  return out;
}

// ---------------------------------------------------------------------------

HypothesisTestResult weak_exogeneity_test(const VecmModel& model, int series) {
  const Eigen::Index n = model.dim();
  require_vecm_index(model, series, n, "weak exogeneity test");
  const auto& m = model.moments;

  const Eigen::VectorXd b = unit(n, series);
  const Eigen::MatrixXd a = orthogonal_complement(b);
  const Eigen::MatrixXd r0b = m.r0 * b;
  const Eigen::MatrixXd r0a = residualize(r0b, m.r0 * a);
  const Eigen::MatrixXd r1 = residualize(r0b, m.r1);
  const auto sol =
      reduced_rank_eigen(moment(r0a, r0a), moment(r0a, r1), moment(r1, r1));

  // |S00| = |S_bb| |S_aa.b| since (a, b) is orthogonal.
  double restricted = log_det_spd(moment(r0b, r0b)) + log_det_spd(moment(r0a, r0a));
  for (int i = 0; i < model.rank; ++i) restricted += std::log1p(-sol.eigenvalues(i));
  const double lr =
      static_cast<double>(m.samples()) * (restricted - unrestricted_log_det(model));
  return lr_result("weak_exogeneity",
                   "series " + std::to_string(series + 1) +
                       " does not respond to the cointegration relations (alpha row = 0)",
                   lr, model.rank);
}

HypothesisTestResult exclusion_test(const VecmModel& model, int series) {
  const auto& m = model.moments;
  const Eigen::Index rows = m.s11.rows();
  require_vecm_index(model, series, rows, "exclusion test");

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(rows, rows - 1);
  for (Eigen::Index i = 0, c = 0; i < rows; ++i) {
    if (i != series) h(i, c++) = 1.0;
  }
  const auto sol =
      reduced_rank_eigen(m.s00, m.s01 * h, h.transpose() * m.s11 * h);
  double restricted = log_det_spd(m.s00);
  for (int i = 0; i < model.rank; ++i) restricted += std::log1p(-sol.eigenvalues(i));
  const double lr =
      static_cast<double>(m.samples()) * (restricted - unrestricted_log_det(model));
  const bool constant_row = series == model.dim();
  return lr_result(
      "exclusion",
      constant_row ? std::string("constant is not in the cointegration space")
                   : "series " + std::to_string(series + 1) +
                         " is not in the cointegration space (beta row = 0)",
      lr, model.rank);
}

HypothesisTestResult unit_vector_cointegration_test(const VecmModel& model,
                                                    int series) {
  const Eigen::Index n = model.dim();
  require_vecm_index(model, series, n, "unit-vector test");
  const auto& m = model.moments;
  const Eigen::Index rows = m.s11.rows();

  double restricted = 0.0;
  if (!m.const_in_space) {
    restricted = known_vector_log_det(m, unit(rows, series), model.rank);
  } else {
    // b(theta) = cos(theta) e_j + sin(theta) e_const covers every
    // (series, free constant) direction; profile over theta.
    const auto objective = [&](double theta) {
      Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
      b(series) = std::cos(theta);
      b(n) = std::sin(theta);
      return known_vector_log_det(m, b, model.rank);
    };
    constexpr int kGrid = 180;
    const double half_pi = 0.5 * std::numbers::pi;
    const double step = std::numbers::pi / kGrid;
    double best_theta = 0.0;
    double best = objective(0.0);
    for (int g = 1; g < kGrid; ++g) {
      const double theta = -half_pi + g * step;
      const double v = objective(theta);
      if (v < best) {
        best = v;
        best_theta = theta;
      }
    }
    const auto refined = boost::math::tools::brent_find_minima(
        objective, best_theta - step, best_theta + step, 40);
    restricted = std::min(best, refined.second);
  }
  const double lr =
      static_cast<double>(m.samples()) * (restricted - unrestricted_log_det(model));
  return lr_result("unit_vector",
                   "series " + std::to_string(series + 1) +
                       " by itself is a cointegrating relation",
                   lr, static_cast<int>(n) - model.rank);
}

}  // namespace causalts
